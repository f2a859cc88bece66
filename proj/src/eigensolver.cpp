#include "eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "polarization.hpp"

namespace polareig {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale(std::span<double> a, double s) {
  for (double& v : a) v *= s;
}

}  // namespace

StencilOperator::StencilOperator(MaskPtr mask, const ScalarField& V) : mask_(std::move(mask)) {
  if (!same_mask(mask_, V.mask))
    throw Error(ErrorCode::mask_mismatch, "potential lives on a different mask");
  const DomainMask& m = *mask_;
  const double h = m.grid().h;
  inv_h2_ = 1.0 / (h * h);
  const int n = m.interior_count();
  potential_ = V.values;
  diag_.resize(n);
  neighbors_.resize(n);
  for (int k = 0; k < n; ++k) {
    CellIndex c = m.cells()[k];
    diag_[k] = 4.0 * inv_h2_ + potential_[k];
    neighbors_[k] = {m.interior_index({c.i - 1, c.j}), m.interior_index({c.i + 1, c.j}),
                     m.interior_index({c.i, c.j - 1}), m.interior_index({c.i, c.j + 1})};
  }
}

void StencilOperator::apply(std::span<const double> x, std::span<double> y) const {
  const int n = size();
  for (int k = 0; k < n; ++k) {
    double acc = diag_[k] * x[k];
    for (int nb : neighbors_[k])
      if (nb >= 0) acc -= inv_h2_ * x[nb];
    y[k] = acc;
  }
}

std::pair<StencilOperator, std::vector<double>> assemble(const MaskPtr& mask,
                                                         const ScalarField& V,
                                                         const ScalarField& g) {
  if (!same_mask(mask, g.mask))
    throw Error(ErrorCode::mask_mismatch, "weight lives on a different mask");
  return {StencilOperator(mask, V), g.values};
}

namespace {

// Jacobi-preconditioned CG. Returns iterations used; throws non_coercive on
// a nonpositive-curvature direction (A not positive definite).
int pcg(const StencilOperator& A, std::span<const double> b, std::span<double> x,
        double rel_tol, int max_iter) {
  const int n = A.size();
  std::vector<double> r(n), z(n), p(n), Ap(n);
  std::vector<double> inv_diag(n);
  for (int k = 0; k < n; ++k)
    inv_diag[k] = A.diagonal()[k] > 0.0 ? 1.0 / A.diagonal()[k] : 1.0;
  A.apply(x, Ap);
  for (int k = 0; k < n; ++k) r[k] = b[k] - Ap[k];
  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }
  double stop = rel_tol * bnorm;
  for (int k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
  p.assign(z.begin(), z.end());
  double rz = dot(r, z);
  int it = 0;
  // Stagnation guard: once roundoff caps the attainable residual, further
  // sweeps cannot help; bail out when no real progress shows for a while.
  double best = norm2(r);
  int stall = 0;
  while (norm2(r) > stop && it < max_iter) {
    A.apply(p, Ap);
    double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
      throw Error(ErrorCode::non_coercive, "operator is not positive definite (CG breakdown)");
    double alpha = rz / pAp;
    for (int k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    for (int k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (int k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    ++it;
    double nr = norm2(r);
    if (nr < 0.5 * best) {
      best = nr;
      stall = 0;
    } else if (++stall >= 200) {
      break;
    }
  }
  return it;
}

// Smallest eigenvalue of a positive definite operator by inverse iteration.
double smallest_eigenvalue(const StencilOperator& A, int max_outer = 200) {
  const int n = A.size();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  std::vector<double> x(n), y(n), Ax(n);
  for (double& v : x) v = uni(rng);
  scale(x, 1.0 / norm2(x));
  double lambda = 0.0, prev = -1.0;
  for (int it = 0; it < max_outer; ++it) {
    y = x;
    pcg(A, x, y, 1e-10, 100 * n + 1000);
    double nz = norm2(y);
    if (!(nz > 0.0)) throw Error(ErrorCode::non_coercive, "inverse iteration collapsed");
    scale(y, 1.0 / nz);
    x = y;
    A.apply(x, Ax);
    lambda = dot(x, Ax);
    if (prev > 0.0 && std::abs(lambda - prev) <= 1e-9 * std::abs(lambda)) break;
    prev = lambda;
  }
  return lambda;
}

}  // namespace

CoercivityReport coercivity_check(const StencilOperator& A, double rel_tol) {
  ScalarField zero = ScalarField::constant(A.mask(), 0.0);
  StencilOperator lap(A.mask(), zero);
  CoercivityReport rep;
  rep.lambda_min_lap = smallest_eigenvalue(lap);
  try {
    rep.lambda_min_A = smallest_eigenvalue(A);
  } catch (const Error&) {
    throw Error(ErrorCode::non_coercive,
                "quadratic form is not coercive: the negative part of V is too large");
  }
  rep.delta0 = rep.lambda_min_A / rep.lambda_min_lap;
  if (!(rep.lambda_min_A > rel_tol * rep.lambda_min_lap))
    throw Error(ErrorCode::non_coercive,
                "quadratic form is not coercive: the negative part of V is too large");
  return rep;
}

EigenResult solve_first(const StencilOperator& A, const std::vector<double>& g,
                        const EigenOptions& opts, const std::vector<double>* warm_start) {
  const int n = A.size();
  if (static_cast<int>(g.size()) != n)
    throw Error(ErrorCode::mask_mismatch, "weight length does not match the operator");
  if (*std::max_element(g.begin(), g.end()) <= 0.0)
    throw Error(ErrorCode::no_positive_direction, "the positive part of g vanishes");

  // Shift so every pencil eigenvalue of inv(A) B + shift I is nonnegative and
  // power iteration cannot lock onto a dominant negative branch.
  double gmin = *std::min_element(g.begin(), g.end());
  double shift = 0.0;
  if (gmin < 0.0) {
    double lam_min = smallest_eigenvalue(A);
    shift = -gmin / lam_min;
  }

  std::vector<double> x(n), y(n), z(n), Ax(n), Bx(n);
  if (warm_start && static_cast<int>(warm_start->size()) == n) {
    x = *warm_start;
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    for (double& v : x) v = uni(rng);
  }
  scale(x, 1.0 / norm2(x));

  EigenResult res;
  res.phi = ScalarField::constant(A.mask(), 0.0);
  long cg_total = 0;
  double rel_res = 1.0;
  double mu_est = 0.0;  // current pencil eigenvalue estimate (for warm starts)
  bool saw_positive_direction = false;
  int it = 0;
  for (; it < opts.max_outer; ++it) {
    for (int k = 0; k < n; ++k) Bx[k] = g[k] * x[k];
    // inexact inverse iteration: inner accuracy tracks the outer residual,
    // floored low enough that the requested final accuracy stays reachable
    double inner_tol = std::clamp(0.01 * rel_res, std::max(1e-15, 0.05 * opts.tol), 1e-2);
    // the solution is near mu * x once the iteration settles
    for (int k = 0; k < n; ++k) z[k] = mu_est * x[k];
    cg_total += pcg(A, Bx, z, inner_tol, opts.max_inner);
    if (shift != 0.0)
      for (int k = 0; k < n; ++k) z[k] += shift * x[k];
    double nz = norm2(z);
    if (!(nz > 0.0))
      throw Error(ErrorCode::no_positive_direction, "power iteration collapsed to zero");
    scale(z, 1.0 / nz);
    x = z;

    A.apply(x, Ax);
    for (int k = 0; k < n; ++k) Bx[k] = g[k] * x[k];
    double xBx = dot(x, Bx);
    mu_est = xBx / dot(x, Ax);
    if (xBx > 0.0) {
      saw_positive_direction = true;
      double lambda = dot(x, Ax) / xBx;
      double rnum = 0.0, rden = 0.0;
      for (int k = 0; k < n; ++k) {
        double d = Ax[k] - lambda * Bx[k];
        rnum += d * d;
        rden += Ax[k] * Ax[k];
      }
      rel_res = std::sqrt(rnum / rden);
      if (rel_res <= opts.tol) {
        res.lambda = lambda;
        break;
      }
    }
  }
  if (it >= opts.max_outer) {
    if (!saw_positive_direction)
      throw Error(ErrorCode::no_positive_direction,
                  "no iterate produced a positive weighted norm");
    throw Error(ErrorCode::non_convergence, "eigensolve did not converge");
  }

  double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total < 0.0) scale(x, -1.0);
  res.phi = ScalarField(A.mask(), x);
  // Strict positivity holds in exact arithmetic; in double precision the far
  // field of a localized ground state can sit below solver roundoff, so only
  // genuine sign changes are rejected here (positivity_check stays strict).
  if (res.phi.min() < -1e-9 * res.phi.max())
    throw Error(ErrorCode::positivity_failure, "first eigenfunction changes sign");
  // Recompute lambda through the shared link sum so Rayleigh numerators agree
  // with dirichlet_energy bit for bit.
  res.lambda = rayleigh(A, g, res.phi);
  res.residual = rel_res;
  res.outer_iters = it + 1;
  res.inner_cg_iters = cg_total;
  return res;
}

double rayleigh(const StencilOperator& A, const std::vector<double>& g, const ScalarField& phi) {
  if (!same_mask(A.mask(), phi.mask))
    throw Error(ErrorCode::mask_mismatch, "phi lives on a different mask");
  double den = 0.0, pot = 0.0;
  for (int k = 0; k < phi.size(); ++k) {
    den += g[k] * phi.values[k] * phi.values[k];
    pot += A.potential()[k] * phi.values[k] * phi.values[k];
  }
  if (!(den > 0.0))
    throw Error(ErrorCode::no_positive_direction, "Rayleigh quotient needs sum g phi^2 > 0");
  double grad = dirichlet_energy(phi) / (A.h() * A.h());
  return (grad + pot) / den;
}

SimplicityReport simplicity_check(const StencilOperator& A, const std::vector<double>& g,
                                  int trials, const EigenOptions& opts) {
  SimplicityReport rep;
  rep.trials = trials;
  std::vector<EigenResult> runs;
  runs.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    EigenOptions o = opts;
    o.seed = opts.seed + 1000003ULL * t;
    runs.push_back(solve_first(A, g, o));
  }
  double lam_min = runs[0].lambda, lam_max = runs[0].lambda;
  for (const auto& r : runs) {
    lam_min = std::min(lam_min, r.lambda);
    lam_max = std::max(lam_max, r.lambda);
  }
  for (size_t a = 0; a < runs.size(); ++a) {
    for (size_t b = a + 1; b < runs.size(); ++b) {
      double c = std::abs(dot(runs[a].phi.values, runs[b].phi.values));
      rep.max_angle_defect = std::max(rep.max_angle_defect, 1.0 - c);
    }
  }
  rep.lambda_spread = (lam_max - lam_min) / std::max(std::abs(lam_max), 1e-300);
  rep.simple = rep.max_angle_defect <= 1e-8 && rep.lambda_spread <= 1e-8;
  return rep;
}

bool positivity_check(const ScalarField& phi) { return phi.min() > 0.0; }

namespace {

// Dense symmetric eigensolve by cyclic Jacobi rotations; eigenvectors in
// columns of V.
void jacobi_eigen(std::vector<double>& M, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& V) {
  auto at = [&](int r, int c) -> double& { return M[static_cast<size_t>(r) * n + c]; };
  V.assign(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) V[static_cast<size_t>(k) * n + k] = 1.0;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) off += at(r, c) * at(r, c);
    if (off <= 1e-28 * n * n) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double app = at(p, p), aqq = at(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = at(k, p), mkq = at(k, q);
          at(k, p) = c * mkp - s * mkq;
          at(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = at(p, k), mqk = at(q, k);
          at(p, k) = c * mpk - s * mqk;
          at(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V[static_cast<size_t>(k) * n + p], vkq = V[static_cast<size_t>(k) * n + q];
          V[static_cast<size_t>(k) * n + p] = c * vkp - s * vkq;
          V[static_cast<size_t>(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigenvalues.resize(n);
  for (int k = 0; k < n; ++k) eigenvalues[k] = at(k, k);
}

}  // namespace

DenseEigenResult dense_first_eigenpair(const DomainMask& mask, const std::vector<double>& V,
                                       const std::vector<double>& g) {
  const int n = mask.interior_count();
  if (static_cast<int>(V.size()) != n || static_cast<int>(g.size()) != n)
    throw Error(ErrorCode::mask_mismatch, "field lengths do not match the mask");
  const double inv_h2 = 1.0 / (mask.grid().h * mask.grid().h);

  // Assemble A densely, straight from mask adjacency.
  std::vector<double> A(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    CellIndex c = mask.cells()[k];
    A[static_cast<size_t>(k) * n + k] = 4.0 * inv_h2 + V[k];
    for (const CellIndex& nb : {CellIndex{c.i - 1, c.j}, CellIndex{c.i + 1, c.j},
                                CellIndex{c.i, c.j - 1}, CellIndex{c.i, c.j + 1}}) {
      int t = mask.interior_index(nb);
      if (t >= 0) A[static_cast<size_t>(k) * n + t] = -inv_h2;
    }
  }

  // Cholesky A = L L'.
  std::vector<double> L(static_cast<size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c <= r; ++c) {
      double s = A[static_cast<size_t>(r) * n + c];
      for (int k = 0; k < c; ++k)
        s -= L[static_cast<size_t>(r) * n + k] * L[static_cast<size_t>(c) * n + k];
      if (r == c) {
        if (!(s > 0.0))
          throw Error(ErrorCode::non_coercive, "dense assembly is not positive definite");
        L[static_cast<size_t>(r) * n + r] = std::sqrt(s);
      } else {
        L[static_cast<size_t>(r) * n + c] = s / L[static_cast<size_t>(c) * n + c];
      }
    }
  }

  // C = inv(L) B inv(L)': columns of inv(L) diag(g) inv(L)^T via triangular
  // solves. First W = inv(L) B (solve L W = B), then C = inv(L) W' likewise.
  auto forward_solve = [&](std::vector<double>& M) {
    // solves L X = M in place, column by column
    for (int col = 0; col < n; ++col) {
      for (int r = 0; r < n; ++r) {
        double s = M[static_cast<size_t>(r) * n + col];
        for (int k = 0; k < r; ++k)
          s -= L[static_cast<size_t>(r) * n + k] * M[static_cast<size_t>(k) * n + col];
        M[static_cast<size_t>(r) * n + col] = s / L[static_cast<size_t>(r) * n + r];
      }
    }
  };
  std::vector<double> C(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) C[static_cast<size_t>(k) * n + k] = g[k];
  forward_solve(C);  // C = inv(L) B
  // transpose, then another forward solve gives (inv(L) (inv(L) B)')' = C
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      std::swap(C[static_cast<size_t>(r) * n + c], C[static_cast<size_t>(c) * n + r]);
  forward_solve(C);
  // symmetrize against roundoff
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      double m = 0.5 * (C[static_cast<size_t>(r) * n + c] + C[static_cast<size_t>(c) * n + r]);
      C[static_cast<size_t>(r) * n + c] = m;
      C[static_cast<size_t>(c) * n + r] = m;
    }

  std::vector<double> mu, W;
  jacobi_eigen(C, n, mu, W);

  int best = -1;
  for (int k = 0; k < n; ++k)
    if (mu[k] > 0.0 && (best < 0 || mu[k] > mu[best])) best = k;
  if (best < 0)
    throw Error(ErrorCode::no_positive_direction, "the pencil has no positive eigenvalue");

  // phi solves L' phi = y.
  std::vector<double> phi(n);
  for (int k = 0; k < n; ++k) phi[k] = W[static_cast<size_t>(k) * n + best];
  for (int r = n - 1; r >= 0; --r) {
    double s = phi[r];
    for (int k = r + 1; k < n; ++k) s -= L[static_cast<size_t>(k) * n + r] * phi[k];
    phi[r] = s / L[static_cast<size_t>(r) * n + r];
  }
  double nz = norm2(phi);
  scale(phi, 1.0 / nz);
  if (std::accumulate(phi.begin(), phi.end(), 0.0) < 0.0) scale(phi, -1.0);

  DenseEigenResult res;
  res.lambda = 1.0 / mu[best];
  res.phi = std::move(phi);
  res.pencil_eigenvalues = std::move(mu);
  return res;
}

}  // namespace polareig
