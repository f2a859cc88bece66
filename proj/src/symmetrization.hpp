#pragma once

#include <optional>

#include "polarization.hpp"

namespace polareig {

// Interior cells grouped into radial shells about the grid middle; shell k
// holds cells with k*bin_width <= |x| < (k+1)*bin_width. bin_width is in
// cells (>= 1) and defaults to the finest binning the grid supports.
struct RadialBinning {
  Point center;
  double bin_width = 0.0;
  std::vector<std::vector<int>> bins;  // interior indices per shell
};

RadialBinning radial_bins(const DomainMask& mask, int bin_width_cells = 1);

// Rearranges f so the k-th largest value sits on the k-th cell in the sort by
// (distance from center, polar angle, linear index). Requires f >= 0; warns
// via shape_error only for non-disk masks when `require_disk`.
ScalarField schwarz_symmetrize(const ScalarField& f);

// Per-column symmetric-decreasing rearrangement about the mask midline:
// largest value at the center, alternating outward, larger member of each
// equidistant pair on the lower row index. Requires a Steiner-symmetric mask.
ScalarField steiner_symmetrize(const ScalarField& f);

// Per radial shell: cells sorted by polar angle from beta (ties by linear
// index), values assigned in non-increasing order. `beta` must be one of the
// 8 grid directions. Radial masks work directly; a non-concentric annulus is
// handled on its own shells about the outer-ball center (pass
// allow_nonradial = true).
ScalarField foliated_schwarz_symmetrize(const ScalarField& f, Point beta,
                                        bool allow_nonradial = false,
                                        int bin_width_cells = 1);

// Polarization characterizations over the grid-compatible half-space
// families; true when max_H ||f_H - f||_inf <= tol.
bool is_schwarz_symmetric(const ScalarField& f, double tol);
bool is_steiner_symmetric(const ScalarField& f, double tol);
bool is_foliated_schwarz_symmetric(const ScalarField& f, Point beta, double tol);

// First of the 8 candidate directions passing the foliated check, or nullopt.
std::optional<Point> find_foliation_axis(const ScalarField& f, double tol);

// The half-space families behind the checks, exposed for reports and tests.
std::vector<HalfSpace> schwarz_family(const DomainMask& mask);
std::vector<HalfSpace> steiner_family(const DomainMask& mask);
std::vector<HalfSpace> foliated_family(const DomainMask& mask, Point beta);

// The 8 grid directions, in the scan order used by find_foliation_axis.
const std::vector<Point>& grid_directions();

}  // namespace polareig
