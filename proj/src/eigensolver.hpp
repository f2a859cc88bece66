#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "rearrangement.hpp"

namespace polareig {

// Matrix-free A = -laplace_h + diag(V) on a masked grid: 5-point stencil
// scaled by 1/h^2 with Dirichlet zero at exterior neighbors. Symmetric, and
// positive definite whenever the coercivity check passes.
class StencilOperator {
 public:
  StencilOperator(MaskPtr mask, const ScalarField& V);

  int size() const { return static_cast<int>(diag_.size()); }
  const MaskPtr& mask() const { return mask_; }
  double h() const { return mask_->grid().h; }
  const std::vector<double>& potential() const { return potential_; }
  const std::vector<double>& diagonal() const { return diag_; }

  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  MaskPtr mask_;
  std::vector<double> potential_;
  std::vector<double> diag_;                  // 4/h^2 + V
  std::vector<std::array<int, 4>> neighbors_;  // interior indices, -1 exterior
  double inv_h2_ = 0.0;
};

// (A, diagonal of B): the weak form of -laplace(phi) + V phi = lambda g phi.
std::pair<StencilOperator, std::vector<double>> assemble(const MaskPtr& mask,
                                                         const ScalarField& V,
                                                         const ScalarField& g);

struct CoercivityReport {
  double lambda_min_A = 0.0;    // smallest eigenvalue of A (estimate)
  double lambda_min_lap = 0.0;  // smallest eigenvalue of -laplace_h
  double delta0 = 0.0;          // lambda_min_A / lambda_min_lap
};

// Inverse-iteration estimate of lambda_min(A); throws non_coercive when A is
// not positive definite (CG breakdown) or the margin is below tolerance.
CoercivityReport coercivity_check(const StencilOperator& A, double rel_tol = 1e-10);

struct EigenOptions {
  double tol = 1e-12;      // residual tolerance, relative to ||A phi||
  int max_outer = 50000;   // near-degenerate pencils converge slowly
  int max_inner = 10000;   // CG iteration cap per solve
  uint64_t seed = 1;
};

struct EigenResult {
  double lambda = 0.0;
  ScalarField phi;         // ||phi||_2 = 1, phi > 0
  double residual = 0.0;   // ||A phi - lambda B phi|| / ||A phi||
  int outer_iters = 0;
  long inner_cg_iters = 0;
};

// First eigenpair of the pencil A phi = lambda B phi with B = diag(g):
// shifted power iteration on inv(A) B with CG inner solves; lambda is the
// reciprocal of the largest positive pencil eigenvalue of B z = mu A z.
// `warm_start` (optional) replaces the seeded random initial vector.
EigenResult solve_first(const StencilOperator& A, const std::vector<double>& g,
                        const EigenOptions& opts,
                        const std::vector<double>* warm_start = nullptr);

// Rayleigh quotient (phi' A phi) / (phi' B phi); the numerator reuses the
// link sum behind dirichlet_energy so the two modules agree on gradients.
double rayleigh(const StencilOperator& A, const std::vector<double>& g, const ScalarField& phi);

struct SimplicityReport {
  int trials = 0;
  double max_angle_defect = 0.0;  // max over pairs of 1 - |cos angle|
  double lambda_spread = 0.0;     // (max - min) / max lambda
  bool simple = false;
};

// Runs solve_first from `trials` independent random starts and compares the
// normalized eigenvectors pairwise.
SimplicityReport simplicity_check(const StencilOperator& A, const std::vector<double>& g,
                                  int trials, const EigenOptions& opts);

bool positivity_check(const ScalarField& phi);

// Dense reference solve of the same pencil: explicit assembly straight from
// the mask (independent of StencilOperator::apply), Cholesky reduction and a
// cyclic Jacobi eigensolver. Intended for small masks; O(n^3).
struct DenseEigenResult {
  double lambda = 0.0;
  std::vector<double> phi;  // unit norm, sum > 0
  std::vector<double> pencil_eigenvalues;  // all mu of B z = mu A z
};
DenseEigenResult dense_first_eigenpair(const DomainMask& mask, const std::vector<double>& V,
                                       const std::vector<double>& g);

}  // namespace polareig
