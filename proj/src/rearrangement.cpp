#include "rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polareig {

ScalarField::ScalarField(MaskPtr mask_, std::vector<double> values_)
    : mask(std::move(mask_)), values(std::move(values_)) {
  if (!mask) throw Error(ErrorCode::invalid_argument, "field needs a mask");
  if (static_cast<int>(values.size()) != mask->interior_count())
    throw Error(ErrorCode::invalid_argument, "field length does not match interior cell count");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_value, "field values must be finite");
}

ScalarField ScalarField::constant(MaskPtr mask, double value) {
  if (!mask) throw Error(ErrorCode::invalid_argument, "field needs a mask");
  return ScalarField(mask, std::vector<double>(mask->interior_count(), value));
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

void require_same_mask(const ScalarField& a, const ScalarField& b) {
  if (!same_mask(a.mask, b.mask))
    throw Error(ErrorCode::mask_mismatch, "fields live on different masks");
}

bool RearrangementClass::singleton() const {
  return std::adjacent_find(sorted_values.begin(), sorted_values.end(),
                            [](double a, double b) { return a != b; }) == sorted_values.end();
}

RearrangementClass class_of(const ScalarField& f0) {
  RearrangementClass cls;
  cls.mask = f0.mask;
  cls.sorted_values = f0.values;
  std::sort(cls.sorted_values.begin(), cls.sorted_values.end(), std::greater<>());
  return cls;
}

bool is_rearrangement(const ScalarField& f, const ScalarField& g) {
  require_same_mask(f, g);
  std::vector<double> a = f.values, b = g.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

namespace {

ScalarField extremal_assign(const RearrangementClass& cls, const ScalarField& h, bool maximize) {
  if (!same_mask(cls.mask, h.mask))
    throw Error(ErrorCode::mask_mismatch, "class and profile live on different masks");
  const int n = cls.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Interior indices already follow increasing linear cell index, so a stable
  // sort by h keeps equal-h cells in linear-index order.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return maximize ? h.values[a] > h.values[b] : h.values[a] < h.values[b];
  });
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[order[k]] = cls.sorted_values[k];
  return ScalarField(cls.mask, std::move(out));
}

}  // namespace

ScalarField extremal_max(const RearrangementClass& cls, const ScalarField& h) {
  return extremal_assign(cls, h, true);
}

ScalarField extremal_min(const RearrangementClass& cls, const ScalarField& h) {
  return extremal_assign(cls, h, false);
}

std::pair<ScalarField, ScalarField> split_parts(const ScalarField& f) {
  std::vector<double> plus(f.values.size()), minus(f.values.size());
  for (size_t k = 0; k < f.values.size(); ++k) {
    plus[k] = std::max(f.values[k], 0.0);
    minus[k] = std::max(-f.values[k], 0.0);
  }
  return {ScalarField(f.mask, std::move(plus)), ScalarField(f.mask, std::move(minus))};
}

}  // namespace polareig
