#include "symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polareig {

namespace {

long long isqrt_ll(long long v) {
  if (v < 0) return 0;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

void require_nonnegative(const ScalarField& f, const char* op) {
  if (!f.nonnegative())
    throw Error(ErrorCode::invalid_value, std::string(op) + " requires a nonnegative field");
}

struct LatticeCentroid {
  long long sum_lx = 0;
  long long sum_ly = 0;
  long long n = 0;
};

LatticeCentroid centroid_of(const DomainMask& mask) {
  LatticeCentroid c;
  const Grid2D& g = mask.grid();
  for (const CellIndex& cell : mask.cells()) {
    c.sum_lx += g.lattice_x(cell.i);
    c.sum_ly += g.lattice_y(cell.j);
  }
  c.n = mask.interior_count();
  return c;
}

// Angle of a lattice direction, reduced to [0, 2pi).
double polar_angle(double dx, double dy) {
  double a = std::atan2(dy, dx);
  if (a < 0) a += 2.0 * std::acos(-1.0);
  return a;
}

std::vector<double> sorted_desc(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

bool unit_grid_direction(Point beta, long* bx, long* by) {
  double len = std::hypot(beta.x, beta.y);
  if (!(len > 0.0)) return false;
  double ux = beta.x / len, uy = beta.y / len;
  const double tol = 1e-9;
  auto comp = [&](double u) -> std::optional<long> {
    if (std::abs(u) < tol) return 0;
    if (std::abs(u - 1.0) < tol) return 1;
    if (std::abs(u + 1.0) < tol) return -1;
    double s = std::sqrt(0.5);
    if (std::abs(u - s) < tol) return 1;
    if (std::abs(u + s) < tol) return -1;
    return std::nullopt;
  };
  auto cx = comp(ux), cy = comp(uy);
  if (!cx || !cy || (*cx == 0 && *cy == 0)) return false;
  // mixed axis/diagonal magnitudes are not grid directions
  if (*cx != 0 && *cy != 0 && std::abs(std::abs(ux) - std::abs(uy)) > tol) return false;
  if (*cx != 0 && *cy == 0 && std::abs(std::abs(ux) - 1.0) > tol) return false;
  if (*cx == 0 && *cy != 0 && std::abs(std::abs(uy) - 1.0) > tol) return false;
  *bx = *cx;
  *by = *cy;
  return true;
}

}  // namespace

RadialBinning radial_bins(const DomainMask& mask, int bin_width_cells) {
  if (bin_width_cells < 1)
    throw Error(ErrorCode::invalid_argument, "bin width must be at least one cell");
  const Grid2D& g = mask.grid();
  RadialBinning rb;
  rb.center = g.middle();
  rb.bin_width = bin_width_cells * g.h;
  for (int k = 0; k < mask.interior_count(); ++k) {
    CellIndex c = mask.cells()[k];
    long long lx = g.lattice_x(c.i), ly = g.lattice_y(c.j);
    long long q = lx * lx + ly * ly;
    // |x| / h = sqrt(q) / 2; shell index floor(|x| / bin_width) exactly.
    long long shell = isqrt_ll(q) / (2LL * bin_width_cells);
    if (static_cast<size_t>(shell) >= rb.bins.size()) rb.bins.resize(shell + 1);
    rb.bins[static_cast<size_t>(shell)].push_back(k);
  }
  return rb;
}

ScalarField schwarz_symmetrize(const ScalarField& f) {
  require_nonnegative(f, "schwarz_symmetrize");
  const DomainMask& mask = *f.mask;
  const Grid2D& g = mask.grid();
  LatticeCentroid cen = centroid_of(mask);
  const int n = f.size();
  // Squared distance from the centroid in (h / 2n)^2 units: exact integers,
  // so mirrored cells compare identically.
  std::vector<long long> q(n);
  std::vector<double> angle(n);
  for (int k = 0; k < n; ++k) {
    CellIndex c = mask.cells()[k];
    long long dx = cen.n * g.lattice_x(c.i) - cen.sum_lx;
    long long dy = cen.n * g.lattice_y(c.j) - cen.sum_ly;
    q[k] = dx * dx + dy * dy;
    angle[k] = polar_angle(static_cast<double>(dx), static_cast<double>(dy));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (q[a] != q[b]) return q[a] < q[b];
    if (angle[a] != angle[b]) return angle[a] < angle[b];
    return a < b;
  });
  std::vector<double> vals = sorted_desc(f.values);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[order[k]] = vals[k];
  return ScalarField(f.mask, std::move(out));
}

ScalarField steiner_symmetrize(const ScalarField& f) {
  require_nonnegative(f, "steiner_symmetrize");
  const DomainMask& mask = *f.mask;
  auto mid2 = steiner_midline2(mask);
  if (!mid2)
    throw Error(ErrorCode::shape_error, "steiner_symmetrize requires a Steiner-symmetric mask");
  const Grid2D& g = mask.grid();
  std::vector<double> out(f.values.size());
  for (int i = 1; i < g.nx - 1; ++i) {
    std::vector<int> column;
    for (int j = 1; j < g.ny - 1; ++j) {
      int k = mask.interior_index({i, j});
      if (k >= 0) column.push_back(k);
    }
    if (column.empty()) continue;
    std::vector<int> order = column;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      long da = std::labs(2L * mask.cells()[a].j - *mid2);
      long db = std::labs(2L * mask.cells()[b].j - *mid2);
      if (da != db) return da < db;
      return mask.cells()[a].j < mask.cells()[b].j;
    });
    std::vector<double> vals(column.size());
    for (size_t t = 0; t < column.size(); ++t) vals[t] = f.values[column[t]];
    std::sort(vals.begin(), vals.end(), std::greater<>());
    for (size_t t = 0; t < order.size(); ++t) out[order[t]] = vals[t];
  }
  return ScalarField(f.mask, std::move(out));
}

ScalarField foliated_schwarz_symmetrize(const ScalarField& f, Point beta, bool allow_nonradial,
                                        int bin_width_cells) {
  require_nonnegative(f, "foliated_schwarz_symmetrize");
  long bx = 0, by = 0;
  if (!unit_grid_direction(beta, &bx, &by))
    throw Error(ErrorCode::invalid_argument, "beta must be one of the 8 grid directions");
  const DomainMask& mask = *f.mask;
  if (!allow_nonradial && !is_radial_mask(mask))
    throw Error(ErrorCode::shape_error,
                "mask is not radial about the grid middle (pass allow_nonradial for an eccentric annulus)");
  const Grid2D& g = mask.grid();
  RadialBinning rb = radial_bins(mask, bin_width_cells);
  const int n = f.size();
  // cos(theta) from beta; exact integer dot products keep beta-mirrored cells
  // bitwise tied.
  std::vector<double> cos_theta(n);
  double nb = std::sqrt(static_cast<double>(bx * bx + by * by));
  for (int k = 0; k < n; ++k) {
    CellIndex c = mask.cells()[k];
    long long lx = g.lattice_x(c.i), ly = g.lattice_y(c.j);
    long long q = lx * lx + ly * ly;
    long long dot = lx * bx + ly * by;
    cos_theta[k] = q == 0 ? 1.0
                          : static_cast<double>(dot) /
                                (std::sqrt(static_cast<double>(q)) * nb);
  }
  std::vector<double> out(f.values.size());
  for (const std::vector<int>& bin : rb.bins) {
    if (bin.empty()) continue;
    std::vector<int> order = bin;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (cos_theta[a] != cos_theta[b]) return cos_theta[a] > cos_theta[b];
      return a < b;
    });
    std::vector<double> vals(bin.size());
    for (size_t t = 0; t < bin.size(); ++t) vals[t] = f.values[bin[t]];
    std::sort(vals.begin(), vals.end(), std::greater<>());
    for (size_t t = 0; t < order.size(); ++t) out[order[t]] = vals[t];
  }
  return ScalarField(f.mask, std::move(out));
}

namespace {

// Enumerates thresholds for one (kind, side) pair, keeping the reference
// point (score numerator `cen_num` over denominator `cen_den`) strictly
// inside H and the boundary within the given score range.
void push_offsets(std::vector<HalfSpace>& out, const DomainMask& mask, HalfSpaceKind kind,
                  long long cen_num, long long cen_den, long smin, long smax) {
  const Grid2D& g = mask.grid();
  auto usable = [&mask](const HalfSpace& h) {
    try {
      return is_polarization_invariant(mask, h);
    } catch (const Error&) {
      return false;  // reflections leave the grid: not usable for this mask
    }
  };
  for (long t = smin - 1; t <= smax + 1; ++t) {
    // H = {score < t}: contains center iff cen < t.
    if (cen_num < t * cen_den) {
      HalfSpace h = lattice_halfspace(g, kind, t, true);
      if (usable(h)) out.push_back(h);
    }
    if (cen_num > t * cen_den) {
      HalfSpace h = lattice_halfspace(g, kind, t, false);
      if (usable(h)) out.push_back(h);
    }
  }
}

struct ScoreRange {
  long min2i = 0, max2i = 0, min2j = 0, max2j = 0;
  long mins = 0, maxs = 0, mind = 0, maxd = 0;
};

ScoreRange score_range(const DomainMask& mask) {
  ScoreRange r;
  bool first = true;
  for (const CellIndex& c : mask.cells()) {
    long s2i = 2L * c.i, s2j = 2L * c.j;
    long ss = c.i + c.j, sd = c.i - c.j;
    if (first) {
      r = {s2i, s2i, s2j, s2j, ss, ss, sd, sd};
      first = false;
    } else {
      r.min2i = std::min(r.min2i, s2i);
      r.max2i = std::max(r.max2i, s2i);
      r.min2j = std::min(r.min2j, s2j);
      r.max2j = std::max(r.max2j, s2j);
      r.mins = std::min(r.mins, ss);
      r.maxs = std::max(r.maxs, ss);
      r.mind = std::min(r.mind, sd);
      r.maxd = std::max(r.maxd, sd);
    }
  }
  return r;
}

}  // namespace

std::vector<HalfSpace> schwarz_family(const DomainMask& mask) {
  LatticeCentroid cen = centroid_of(mask);
  const Grid2D& g = mask.grid();
  ScoreRange r = score_range(mask);
  std::vector<HalfSpace> out;
  // Centroid scores as exact rationals (numerator over cen.n): cx = sum(2i),
  // cy = sum(2j); the diagonal scores sum(i+j) and sum(i-j) follow exactly
  // since cx +- cy is even.
  long long cx = cen.sum_lx + cen.n * (g.nx - 1);
  long long cy = cen.sum_ly + cen.n * (g.ny - 1);
  long long cs = (cx + cy) / 2, cd = (cx - cy) / 2;
  push_offsets(out, mask, HalfSpaceKind::axis_x, cx, cen.n, r.min2i, r.max2i);
  push_offsets(out, mask, HalfSpaceKind::axis_y, cy, cen.n, r.min2j, r.max2j);
  push_offsets(out, mask, HalfSpaceKind::diag_sum, cs, cen.n, r.mins, r.maxs);
  push_offsets(out, mask, HalfSpaceKind::diag_diff, cd, cen.n, r.mind, r.maxd);
  return out;
}

std::vector<HalfSpace> steiner_family(const DomainMask& mask) {
  auto mid2 = steiner_midline2(mask);
  if (!mid2)
    throw Error(ErrorCode::shape_error, "mask is not Steiner symmetric");
  ScoreRange r = score_range(mask);
  std::vector<HalfSpace> out;
  push_offsets(out, mask, HalfSpaceKind::axis_y, *mid2, 1, r.min2j, r.max2j);
  return out;
}

std::vector<HalfSpace> foliated_family(const DomainMask& mask, Point beta) {
  long bx = 0, by = 0;
  if (!unit_grid_direction(beta, &bx, &by))
    throw Error(ErrorCode::invalid_argument, "beta must be one of the 8 grid directions");
  const Grid2D& g = mask.grid();
  std::vector<HalfSpace> out;
  auto add = [&](HalfSpaceKind kind, long grad, long twice_threshold) {
    if (grad == 0) return;                 // beta parallel to the boundary
    if (twice_threshold % 2 != 0) return;  // boundary misses the lattice
    long t = twice_threshold / 2;
    HalfSpace h = lattice_halfspace(g, kind, t, grad < 0);
    try {
      if (is_polarization_invariant(mask, h)) out.push_back(h);
    } catch (const Error&) {
      // reflections leave the grid: not usable for this mask
    }
  };
  // Boundaries through the grid middle; the score of the middle doubled is
  // integral by construction for the axes and needs nx+ny even for diagonals.
  add(HalfSpaceKind::axis_x, bx, 2L * (g.nx - 1));
  add(HalfSpaceKind::axis_y, by, 2L * (g.ny - 1));
  add(HalfSpaceKind::diag_sum, bx + by, (g.nx - 1) + (g.ny - 1));
  add(HalfSpaceKind::diag_diff, bx - by, (g.nx - 1) - (g.ny - 1));
  return out;
}

namespace {

bool passes_family(const ScalarField& f, const std::vector<HalfSpace>& family, double tol) {
  // An empty family certifies nothing (e.g. directions whose half-spaces do
  // not leave an eccentric mask invariant).
  if (family.empty()) return false;
  for (const HalfSpace& h : family)
    if (polarization_defect_linf(f, h) > tol) return false;
  return true;
}

}  // namespace

bool is_schwarz_symmetric(const ScalarField& f, double tol) {
  return passes_family(f, schwarz_family(*f.mask), tol);
}

bool is_steiner_symmetric(const ScalarField& f, double tol) {
  return passes_family(f, steiner_family(*f.mask), tol);
}

bool is_foliated_schwarz_symmetric(const ScalarField& f, Point beta, double tol) {
  return passes_family(f, foliated_family(*f.mask, beta), tol);
}

const std::vector<Point>& grid_directions() {
  static const double s = std::sqrt(0.5);
  static const std::vector<Point> dirs = {
      {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {s, s}, {-s, -s}, {s, -s}, {-s, s}};
  return dirs;
}

std::optional<Point> find_foliation_axis(const ScalarField& f, double tol) {
  for (const Point& beta : grid_directions())
    if (is_foliated_schwarz_symmetric(f, beta, tol)) return beta;
  return std::nullopt;
}

}  // namespace polareig
