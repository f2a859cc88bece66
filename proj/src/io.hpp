#pragma once

#include <string>

#include "rearrangement.hpp"

namespace polareig {

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

// Mask file: header "nx ny h ox oy", then ny rows of nx characters,
// '#' interior / '.' exterior, row j = 0 first. Bit-exact round trip.
std::string mask_to_text(const DomainMask& mask);
DomainMask mask_from_text(const std::string& text);
void write_mask(const DomainMask& mask, const std::string& path);
DomainMask read_mask(const std::string& path);

// Field file: the mask text followed by one value per line in interior-cell
// order, full precision.
std::string field_to_text(const ScalarField& f);
ScalarField field_from_text(const std::string& text);
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);

// ASCII PGM heatmap with linear min-max scaling over interior values;
// exterior cells render as 0. Returns the scaling bounds used.
struct PgmScale {
  double lo = 0.0;
  double hi = 0.0;
};
PgmScale write_pgm(const ScalarField& f, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace polareig
