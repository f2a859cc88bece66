#pragma once

#include "rearrangement.hpp"

namespace polareig {

// Two-point symmetrization of a field with respect to H on a polarization
// invariant mask (mask == mask_H, else non_invariant_mask error): cells in H
// keep the larger of f(c), f(sigma(c)); cells strictly outside keep the
// smaller; cells on the boundary are fixed. Values compare against the zero
// extension when the mirror is exterior or off-grid.
ScalarField polarize(const ScalarField& f, const HalfSpace& h);

// Dual polarization f_H o sigma_H: min on the H side, max on the complement.
ScalarField dual_polarize(const ScalarField& f, const HalfSpace& h);

// sum(v_H * w_H) - sum(v * w); nonnegative when at least one of v, w is
// nonnegative (Hardy-Littlewood for polarization).
double hardy_littlewood_gap(const ScalarField& v, const ScalarField& w, const HalfSpace& h);

// sum(v * w) - sum(v^H * w_H); nonnegative when w is nonnegative.
double reverse_hl_gap(const ScalarField& v, const ScalarField& w, const HalfSpace& h);

// Link-based Dirichlet energy: sum over interior nearest-neighbor links and
// Dirichlet boundary links of the squared value difference, (dv/h)^2 * h^2.
// Uses the same traversal as the eigensolver stencil (whose quadratic form is
// this sum divided by h^2).
double dirichlet_energy(const ScalarField& f);

// max over interior cells of |f_H - f| (requires invariant mask).
double polarization_defect_linf(const ScalarField& f, const HalfSpace& h);

// ||f_H - f||_2 / ||f||_2 (0 when f is identically zero).
double polarization_defect_l2rel(const ScalarField& f, const HalfSpace& h);

}  // namespace polareig
