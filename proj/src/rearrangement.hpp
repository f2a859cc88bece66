#pragma once

#include <utility>
#include <vector>

#include "geometry.hpp"

namespace polareig {

// Real values on the interior cells of a mask, in interior-cell order;
// implicitly zero-extended outside the mask. Values must be finite.
struct ScalarField {
  MaskPtr mask;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(MaskPtr mask_, std::vector<double> values_);
  static ScalarField constant(MaskPtr mask, double value);

  double operator[](int k) const { return values[k]; }
  int size() const { return static_cast<int>(values.size()); }
  double min() const;
  double max() const;
  bool nonnegative() const { return min() >= 0.0; }
};

void require_same_mask(const ScalarField& a, const ScalarField& b);

// Discrete rearrangement class of a generating field: the multiset of its
// values over a fixed mask, stored in non-increasing order. Members of the
// class are all assignments of those values to the interior cells.
struct RearrangementClass {
  MaskPtr mask;
  std::vector<double> sorted_values;  // non-increasing

  int size() const { return static_cast<int>(sorted_values.size()); }
  bool singleton() const;
};

RearrangementClass class_of(const ScalarField& f0);

// Exact (bitwise) multiset equality of values; requires equal masks.
bool is_rearrangement(const ScalarField& f, const ScalarField& g);

// Member of the class maximizing (resp. minimizing) sum f*h: the k-th largest
// class value goes to the cell with the k-th largest (resp. smallest) h
// value; cells with equal h are ordered by linear cell index.
ScalarField extremal_max(const RearrangementClass& cls, const ScalarField& h);
ScalarField extremal_min(const RearrangementClass& cls, const ScalarField& h);

// (f+, f-) with f = f+ - f-, both nonnegative, disjoint supports.
std::pair<ScalarField, ScalarField> split_parts(const ScalarField& f);

}  // namespace polareig
