#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace polareig {

namespace {

constexpr double kAlignTol = 1e-9;

// Nearest integer with an alignment check; the boundary of a half-space must
// sit on the half-step lattice for reflections to be exact cell bijections.
std::optional<long> snap_integer(double v) {
  double r = std::round(v);
  if (std::abs(v - r) > kAlignTol * std::max(1.0, std::abs(v))) return std::nullopt;
  return static_cast<long>(r);
}

}  // namespace

Grid2D::Grid2D(int nx_, int ny_, double h_, double ox_, double oy_)
    : nx(nx_), ny(ny_), h(h_), ox(ox_), oy(oy_) {
  if (nx < 3 || ny < 3) throw Error(ErrorCode::invalid_argument, "grid needs nx,ny >= 3");
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::invalid_argument, "grid spacing must be positive");
  if (!std::isfinite(ox) || !std::isfinite(oy)) throw Error(ErrorCode::invalid_argument, "grid origin must be finite");
}

Grid2D make_centered_grid(int n, double halfwidth, int margin) {
  if (n < 2 * margin + 3) throw Error(ErrorCode::invalid_argument, "grid too small for margin");
  if (!(halfwidth > 0.0)) throw Error(ErrorCode::invalid_argument, "halfwidth must be positive");
  double h = 2.0 * halfwidth / (n - 1 - 2 * margin);
  double half_span = (n - 1) * h / 2.0;
  return Grid2D(n, n, h, -half_span, -half_span);
}

DomainMask::DomainMask(Grid2D grid, std::vector<uint8_t> inside)
    : grid_(grid), inside_(std::move(inside)) {
  if (static_cast<long>(inside_.size()) != grid_.cell_count())
    throw Error(ErrorCode::invalid_argument, "mask bitmap size does not match grid");
  index_.assign(inside_.size(), -1);
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      CellIndex c{i, j};
      if (!inside_[grid_.linear(c)]) continue;
      if (i == 0 || j == 0 || i == grid_.nx - 1 || j == grid_.ny - 1)
        throw Error(ErrorCode::invalid_argument,
                    "interior cell on the outermost grid ring; the ring must stay exterior");
      index_[grid_.linear(c)] = static_cast<int>(cells_.size());
      cells_.push_back(c);
    }
  }
  if (cells_.empty()) throw Error(ErrorCode::empty_mask, "mask has no interior cells");
}

bool same_mask(const MaskPtr& a, const MaskPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

HalfSpace::HalfSpace(double nx_, double ny_, double offset_) : nx(nx_), ny(ny_), offset(offset_) {
  double len = std::hypot(nx, ny);
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(offset))
    throw Error(ErrorCode::invalid_argument, "half-space normal/offset must be finite and nonzero");
  nx /= len;
  ny /= len;
  double ax = std::abs(nx), ay = std::abs(ny);
  bool axis = (ax < kAlignTol || ay < kAlignTol);
  bool diag = std::abs(ax - ay) < kAlignTol;
  if (!axis && !diag)
    throw Error(ErrorCode::incompatible_halfspace,
                "half-space normal must be axis-aligned or at 45 degrees");
}

CompiledHalfSpace::CompiledHalfSpace(const Grid2D& grid, const HalfSpace& h) : grid_(grid) {
  const double sqrt2 = std::sqrt(2.0);
  std::optional<long> t;
  if (std::abs(h.ny) < kAlignTol) {
    kind_ = HalfSpaceKind::axis_x;
    // boundary x = b with b = offset / nx_component (nx = +-1)
    double b = h.offset / h.nx;
    t = snap_integer(2.0 * (b - grid.ox) / grid.h);
    side_ = h.nx > 0 ? 1 : -1;
  } else if (std::abs(h.nx) < kAlignTol) {
    kind_ = HalfSpaceKind::axis_y;
    double b = h.offset / h.ny;
    t = snap_integer(2.0 * (b - grid.oy) / grid.h);
    side_ = h.ny > 0 ? 1 : -1;
  } else if (h.nx * h.ny > 0) {
    kind_ = HalfSpaceKind::diag_sum;
    // boundary x1 + x2 = offset * sqrt(2) / sign
    double b = h.offset * sqrt2 * (h.nx > 0 ? 1.0 : -1.0);
    t = snap_integer((b - grid.ox - grid.oy) / grid.h);
    side_ = h.nx > 0 ? 1 : -1;
  } else {
    kind_ = HalfSpaceKind::diag_diff;
    double b = h.offset * sqrt2 * (h.nx > 0 ? 1.0 : -1.0);
    t = snap_integer((b - grid.ox + grid.oy) / grid.h);
    side_ = h.nx > 0 ? 1 : -1;
  }
  if (!t)
    throw Error(ErrorCode::incompatible_halfspace,
                "half-space boundary does not align with cell centers or midpoints");
  threshold_ = *t;
}

std::optional<CellIndex> CompiledHalfSpace::reflect(CellIndex c) const {
  CellIndex r;
  switch (kind_) {
    case HalfSpaceKind::axis_x:
      r = {static_cast<int>(threshold_ - c.i), c.j};
      break;
    case HalfSpaceKind::axis_y:
      r = {c.i, static_cast<int>(threshold_ - c.j)};
      break;
    case HalfSpaceKind::diag_sum:
      r = {static_cast<int>(threshold_ - c.j), static_cast<int>(threshold_ - c.i)};
      break;
    default:
      r = {static_cast<int>(c.j + threshold_), static_cast<int>(c.i - threshold_)};
      break;
  }
  if (!grid_.contains(r)) return std::nullopt;
  return r;
}

HalfSpace lattice_halfspace(const Grid2D& grid, HalfSpaceKind kind, long threshold,
                            bool less_side) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double sgn = less_side ? 1.0 : -1.0;
  switch (kind) {
    case HalfSpaceKind::axis_x: {
      double b = grid.ox + threshold * grid.h / 2.0;
      return HalfSpace(sgn, 0.0, sgn * b);
    }
    case HalfSpaceKind::axis_y: {
      double b = grid.oy + threshold * grid.h / 2.0;
      return HalfSpace(0.0, sgn, sgn * b);
    }
    case HalfSpaceKind::diag_sum: {
      double b = grid.ox + grid.oy + threshold * grid.h;
      return HalfSpace(sgn * inv_sqrt2, sgn * inv_sqrt2, sgn * b * inv_sqrt2);
    }
    default: {
      double b = grid.ox - grid.oy + threshold * grid.h;
      return HalfSpace(sgn * inv_sqrt2, -sgn * inv_sqrt2, sgn * b * inv_sqrt2);
    }
  }
}

namespace {

// Builds a mask from a predicate over lattice offsets (half-steps from the
// grid middle); the outermost ring is always exterior.
template <typename Pred>
DomainMask build_mask(const Grid2D& grid, Pred&& pred) {
  std::vector<uint8_t> inside(grid.cell_count(), 0);
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) {
      if (pred(grid.lattice_x(i), grid.lattice_y(j)))
        inside[grid.linear({i, j})] = 1;
    }
  }
  return DomainMask(grid, std::move(inside));
}

}  // namespace

DomainMask make_disk_mask(const Grid2D& grid, Point center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "disk radius must be positive");
  double half = grid.h / 2.0;
  double exi = (center.x - grid.middle().x) / half;
  double eyj = (center.y - grid.middle().y) / half;
  double r2 = radius * radius;
  std::optional<long> cx = snap_integer(exi), cy = snap_integer(eyj);
  if (cx && cy) {
    // Lattice-aligned center: evaluate in exact integer offsets so mirrored
    // cells classify identically.
    long cxi = *cx, cyj = *cy;
    double h2 = half * half;
    return build_mask(grid, [&](long lx, long ly) {
      long dx = lx - cxi, dy = ly - cyj;
      return static_cast<double>(dx * dx + dy * dy) * h2 < r2;
    });
  }
  return build_mask(grid, [&](long lx, long ly) {
    double dx = lx * half - (center.x - grid.middle().x);
    double dy = ly * half - (center.y - grid.middle().y);
    return dx * dx + dy * dy < r2;
  });
}

DomainMask make_annulus_mask(const Grid2D& grid, double outer_r, double inner_r, double shift) {
  if (!(inner_r > 0.0) || !(inner_r < outer_r))
    throw Error(ErrorCode::invalid_argument, "annulus needs 0 < r < R");
  if (shift < 0.0 || shift >= outer_r - inner_r)
    throw Error(ErrorCode::invalid_argument, "annulus needs 0 <= t < R - r");
  double half = grid.h / 2.0;
  double h2 = half * half;
  double R2 = outer_r * outer_r, r2 = inner_r * inner_r;
  return build_mask(grid, [&](long lx, long ly) {
    if (static_cast<double>(lx * lx + ly * ly) * h2 >= R2) return false;
    double dx = lx * half - shift;
    double dy = ly * half;
    return dx * dx + dy * dy > r2;
  });
}

DomainMask make_steiner_mask(const Grid2D& grid, SteinerKind kind, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error(ErrorCode::shape_error, "shape parameters must be positive");
  double half = grid.h / 2.0;
  auto pred = [&](long lx, long ly) -> bool {
    double x = lx * half, y = ly * half;
    switch (kind) {
      case SteinerKind::rectangle:
        return std::abs(x) < a && std::abs(y) < b;
      case SteinerKind::ellipse: {
        double u = x / a, v = y / b;
        return u * u + v * v < 1.0;
      }
      default: {  // stadium: within distance b of the segment |x| <= a, y = 0
        double u = std::max(std::abs(x) - a, 0.0);
        return u * u + y * y < b * b;
      }
    }
  };
  // Reject shapes that spill past the valid interior band.
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (i > 0 && i < grid.nx - 1 && j > 0 && j < grid.ny - 1) continue;
      if (pred(grid.lattice_x(i), grid.lattice_y(j)))
        throw Error(ErrorCode::shape_error, "shape does not fit inside the grid");
    }
  }
  DomainMask mask = build_mask(grid, pred);
  if (!is_steiner_symmetric_mask(mask))
    throw Error(ErrorCode::shape_error, "constructed mask is not Steiner symmetric");
  return mask;
}

std::optional<CellIndex> reflect_cell(const HalfSpace& h, CellIndex c, const Grid2D& grid) {
  CompiledHalfSpace ch(grid, h);
  return ch.reflect(c);
}

DomainMask polarize_domain(const DomainMask& mask, const HalfSpace& h) {
  const Grid2D& grid = mask.grid();
  CompiledHalfSpace ch(grid, h);
  std::vector<uint8_t> inside(grid.cell_count(), 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      CellIndex c{i, j};
      auto mirror = ch.reflect(c);
      bool self = mask.inside(c);
      bool other = mirror && mask.inside(*mirror);
      bool result;
      if (ch.in_open(c))
        result = self || other;
      else if (ch.on_boundary(c))
        result = self;
      else
        result = self && other;
      if (result) inside[grid.linear(c)] = 1;
    }
  }
  // Interior cells strictly outside H whose mirror is off-grid would carry
  // their mass out of the lattice; the set formula cannot represent that.
  for (const CellIndex& c : mask.cells()) {
    if (!ch.in_open(c) && !ch.on_boundary(c) && !ch.reflect(c))
      throw Error(ErrorCode::incompatible_halfspace,
                  "polarization reflects interior cells off the grid");
  }
  try {
    DomainMask result(grid, std::move(inside));
    if (result.interior_count() != mask.interior_count())
      throw Error(ErrorCode::incompatible_halfspace, "polarization changed the cell count");
    return result;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::incompatible_halfspace) throw;
    // cells pushed onto the boundary ring (or emptied out): same story, the
    // lattice cannot hold the polarized set
    throw Error(ErrorCode::incompatible_halfspace, e.what());
  }
}

bool is_polarization_invariant(const DomainMask& mask, const HalfSpace& h) {
  try {
    return polarize_domain(mask, h) == mask;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::incompatible_halfspace) throw;
    return false;
  }
}

bool is_reflection_symmetric(const DomainMask& mask, const HalfSpace& h) {
  CompiledHalfSpace ch(mask.grid(), h);
  for (const CellIndex& c : mask.cells()) {
    auto mirror = ch.reflect(c);
    if (!mirror || !mask.inside(*mirror)) return false;
  }
  return true;
}

std::optional<long> steiner_midline2(const DomainMask& mask) {
  const Grid2D& grid = mask.grid();
  std::optional<long> mid2;
  for (int i = 1; i < grid.nx - 1; ++i) {
    int lo = -1, hi = -1;
    int count = 0;
    for (int j = 1; j < grid.ny - 1; ++j) {
      if (!mask.inside({i, j})) continue;
      if (lo < 0) lo = j;
      hi = j;
      ++count;
    }
    if (count == 0) continue;
    if (count != hi - lo + 1) return std::nullopt;  // gap in the column
    long m = static_cast<long>(lo) + hi;
    if (mid2 && *mid2 != m) return std::nullopt;  // runs not co-centered
    mid2 = m;
  }
  return mid2;
}

bool is_steiner_symmetric_mask(const DomainMask& mask) {
  return steiner_midline2(mask).has_value();
}

bool is_radial_mask(const DomainMask& mask) {
  const Grid2D& grid = mask.grid();
  std::map<long, bool> status;
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) {
      long lx = grid.lattice_x(i), ly = grid.lattice_y(j);
      long q = lx * lx + ly * ly;
      bool in = mask.inside({i, j});
      auto [it, fresh] = status.emplace(q, in);
      if (!fresh && it->second != in) return false;
    }
  }
  return true;
}

}  // namespace polareig
