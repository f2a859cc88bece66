#include "polarization.hpp"

#include <algorithm>
#include <cmath>

namespace polareig {

namespace {

ScalarField two_point(const ScalarField& f, const HalfSpace& h, bool dual) {
  const DomainMask& mask = *f.mask;
  CompiledHalfSpace ch(mask.grid(), h);
  if (!is_polarization_invariant(mask, h))
    throw Error(ErrorCode::non_invariant_mask, "mask is not polarization invariant for this half-space");
  std::vector<double> out(f.values.size());
  for (int k = 0; k < f.size(); ++k) {
    CellIndex c = mask.cells()[k];
    if (ch.on_boundary(c)) {
      out[k] = f.values[k];
      continue;
    }
    auto mirror = ch.reflect(c);
    int mi = mirror ? mask.interior_index(*mirror) : -1;
    double fm = mi >= 0 ? f.values[mi] : 0.0;  // zero extension
    bool keep_max = ch.in_open(c) != dual;
    out[k] = keep_max ? std::max(f.values[k], fm) : std::min(f.values[k], fm);
  }
  return ScalarField(f.mask, std::move(out));
}

}  // namespace

ScalarField polarize(const ScalarField& f, const HalfSpace& h) { return two_point(f, h, false); }

ScalarField dual_polarize(const ScalarField& f, const HalfSpace& h) { return two_point(f, h, true); }

double hardy_littlewood_gap(const ScalarField& v, const ScalarField& w, const HalfSpace& h) {
  require_same_mask(v, w);
  if (!v.nonnegative() && !w.nonnegative())
    throw Error(ErrorCode::invalid_argument, "hardy_littlewood_gap needs at least one nonnegative field");
  ScalarField vh = polarize(v, h), wh = polarize(w, h);
  double after = 0.0, before = 0.0;
  for (int k = 0; k < v.size(); ++k) {
    after += vh.values[k] * wh.values[k];
    before += v.values[k] * w.values[k];
  }
  return after - before;
}

double reverse_hl_gap(const ScalarField& v, const ScalarField& w, const HalfSpace& h) {
  require_same_mask(v, w);
  if (!w.nonnegative())
    throw Error(ErrorCode::invalid_argument, "reverse_hl_gap needs w nonnegative");
  ScalarField vdual = dual_polarize(v, h), wh = polarize(w, h);
  double after = 0.0, before = 0.0;
  for (int k = 0; k < v.size(); ++k) {
    after += vdual.values[k] * wh.values[k];
    before += v.values[k] * w.values[k];
  }
  return before - after;
}

double dirichlet_energy(const ScalarField& f) {
  const DomainMask& mask = *f.mask;
  double sum = 0.0;
  // Right and up links from every interior cell, plus every Dirichlet link
  // (counted once from the interior side).
  for (int k = 0; k < f.size(); ++k) {
    CellIndex c = mask.cells()[k];
    const CellIndex right{c.i + 1, c.j}, up{c.i, c.j + 1}, left{c.i - 1, c.j}, down{c.i, c.j - 1};
    double v = f.values[k];
    for (const CellIndex& n : {right, up}) {
      int ni = mask.interior_index(n);
      double d = v - (ni >= 0 ? f.values[ni] : 0.0);
      sum += d * d;
    }
    for (const CellIndex& n : {left, down}) {
      if (mask.interior_index(n) < 0) sum += v * v;
    }
  }
  return sum;
}

double polarization_defect_linf(const ScalarField& f, const HalfSpace& h) {
  ScalarField fh = polarize(f, h);
  double worst = 0.0;
  for (int k = 0; k < f.size(); ++k)
    worst = std::max(worst, std::abs(fh.values[k] - f.values[k]));
  return worst;
}

double polarization_defect_l2rel(const ScalarField& f, const HalfSpace& h) {
  ScalarField fh = polarize(f, h);
  double diff = 0.0, norm = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    double d = fh.values[k] - f.values[k];
    diff += d * d;
    norm += f.values[k] * f.values[k];
  }
  if (norm == 0.0) return 0.0;
  return std::sqrt(diff / norm);
}

}  // namespace polareig
