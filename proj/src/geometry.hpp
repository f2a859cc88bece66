#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polareig {

// Error taxonomy shared across the library. The C API maps these to status
// codes; C++ callers catch Error directly.
enum class ErrorCode {
  invalid_argument,
  incompatible_halfspace,
  mask_mismatch,
  non_invariant_mask,
  empty_mask,
  shape_error,
  invalid_value,
  io_error,
  config_error,
  non_coercive,
  no_positive_direction,
  non_convergence,
  positivity_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Uniform Cartesian grid; cell (i,j) has center origin + (i*h, j*h).
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double ox = 0.0;
  double oy = 0.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double h_, double ox_ = 0.0, double oy_ = 0.0);

  Point cell_center(CellIndex c) const { return {ox + c.i * h, oy + c.j * h}; }
  long cell_count() const { return static_cast<long>(nx) * ny; }
  long linear(CellIndex c) const { return static_cast<long>(c.j) * nx + c.i; }
  bool contains(CellIndex c) const { return c.i >= 0 && c.i < nx && c.j >= 0 && c.j < ny; }

  // Cell-center coordinates in half-step units about the grid middle:
  // lattice_x(i) = 2*i - (nx-1), so mirrored cells negate exactly.
  long lattice_x(int i) const { return 2L * i - (nx - 1); }
  long lattice_y(int j) const { return 2L * j - (ny - 1); }
  Point middle() const { return {ox + (nx - 1) * h / 2.0, oy + (ny - 1) * h / 2.0}; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// Grid whose payload [-halfwidth, halfwidth] is spanned by the interior
// lattice with `margin` exterior cells on each side; grid middle lands
// exactly on (0,0).
Grid2D make_centered_grid(int n, double halfwidth, int margin = 2);

// Boolean interior mask over a grid. Invariants: at least one interior cell,
// and no interior cell on the outermost ring (every interior cell has its 4
// stencil neighbors on the grid; exterior neighbors are Dirichlet boundary).
class DomainMask {
 public:
  DomainMask(Grid2D grid, std::vector<uint8_t> inside);

  const Grid2D& grid() const { return grid_; }
  bool inside(CellIndex c) const { return grid_.contains(c) && inside_[grid_.linear(c)] != 0; }
  int interior_count() const { return static_cast<int>(cells_.size()); }
  // Interior cells in scan order (j, then i), which is also increasing
  // linear index; field values use this ordering.
  const std::vector<CellIndex>& cells() const { return cells_; }
  // Interior index of a cell, or -1.
  int interior_index(CellIndex c) const {
    return grid_.contains(c) ? index_[grid_.linear(c)] : -1;
  }

  friend bool operator==(const DomainMask& a, const DomainMask& b) {
    return a.grid_ == b.grid_ && a.inside_ == b.inside_;
  }

 private:
  Grid2D grid_;
  std::vector<uint8_t> inside_;
  std::vector<CellIndex> cells_;
  std::vector<int> index_;
};

using MaskPtr = std::shared_ptr<const DomainMask>;

bool same_mask(const MaskPtr& a, const MaskPtr& b);

enum class HalfSpaceKind { axis_x, axis_y, diag_sum, diag_diff };

// Open affine half-space H = {x : x . normal < offset} with the normal
// restricted to the 8 grid directions (axes and diagonals). The boundary must
// hit cell centers or midpoints between centers for a given grid, otherwise
// operations report an incompatibility error.
struct HalfSpace {
  double nx = 1.0;
  double ny = 0.0;
  double offset = 0.0;

  HalfSpace() = default;
  HalfSpace(double nx_, double ny_, double offset_);
};

// Integer side/reflection queries for a (grid, half-space) pair. Scores use
// half-step units on the axes (so midpoint boundaries stay integral) and unit
// steps on the diagonals.
class CompiledHalfSpace {
 public:
  CompiledHalfSpace(const Grid2D& grid, const HalfSpace& h);

  bool in_open(CellIndex c) const {
    long s = score(c);
    return side_ > 0 ? s < threshold_ : s > threshold_;
  }
  bool on_boundary(CellIndex c) const { return score(c) == threshold_; }
  // Reflected cell, or nullopt when the image leaves the grid.
  std::optional<CellIndex> reflect(CellIndex c) const;

  HalfSpaceKind kind() const { return kind_; }
  long threshold() const { return threshold_; }
  int side() const { return side_; }

 private:
  long score(CellIndex c) const {
    switch (kind_) {
      case HalfSpaceKind::axis_x: return 2L * c.i;
      case HalfSpaceKind::axis_y: return 2L * c.j;
      case HalfSpaceKind::diag_sum: return static_cast<long>(c.i) + c.j;
      default: return static_cast<long>(c.i) - c.j;
    }
  }

  Grid2D grid_;
  HalfSpaceKind kind_;
  long threshold_ = 0;
  int side_ = 1;
};

// Half-space with an exact lattice boundary for a grid; `threshold` follows
// CompiledHalfSpace score conventions and `less_side` picks which side is H.
HalfSpace lattice_halfspace(const Grid2D& grid, HalfSpaceKind kind, long threshold,
                            bool less_side);

enum class SteinerKind { rectangle, stadium, ellipse };

DomainMask make_disk_mask(const Grid2D& grid, Point center, double radius);
DomainMask make_annulus_mask(const Grid2D& grid, double outer_r, double inner_r, double shift);
DomainMask make_steiner_mask(const Grid2D& grid, SteinerKind kind, double a, double b);

// Reflection of a cell across the boundary of H; nullopt when the image is
// off-grid. Throws on grid-incompatible half-spaces.
std::optional<CellIndex> reflect_cell(const HalfSpace& h, CellIndex c, const Grid2D& grid);

// Set polarization Omega_H = ((Omega u sigma(Omega)) n H) u (Omega n sigma(Omega)),
// evaluated cellwise. Throws when the reflection would push interior mass off
// the grid (the discrete formula would lose cells).
DomainMask polarize_domain(const DomainMask& mask, const HalfSpace& h);

bool is_polarization_invariant(const DomainMask& mask, const HalfSpace& h);
bool is_reflection_symmetric(const DomainMask& mask, const HalfSpace& h);

// True when every column of the mask is one contiguous run and all runs share
// a common center row line; `midline2` is that line's j-coordinate doubled.
bool is_steiner_symmetric_mask(const DomainMask& mask);
std::optional<long> steiner_midline2(const DomainMask& mask);

// True when interior membership depends only on the distance from the grid
// middle (disk or concentric annulus up to lattice exactness).
bool is_radial_mask(const DomainMask& mask);

}  // namespace polareig
