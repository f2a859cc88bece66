#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polareig {

std::string format_double(double v) {
  char buf[40];
  // shortest representation that parses back exactly
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string mask_to_text(const DomainMask& mask) {
  const Grid2D& g = mask.grid();
  std::ostringstream out;
  out << g.nx << ' ' << g.ny << ' ' << format_double(g.h) << ' ' << format_double(g.ox) << ' '
      << format_double(g.oy) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) out << (mask.inside({i, j}) ? '#' : '.');
    out << '\n';
  }
  return out.str();
}

DomainMask mask_from_text(const std::string& text) {
  std::istringstream in(text);
  int nx = 0, ny = 0;
  double h = 0.0, ox = 0.0, oy = 0.0;
  if (!(in >> nx >> ny >> h >> ox >> oy))
    throw Error(ErrorCode::io_error, "bad mask header");
  Grid2D grid(nx, ny, h, ox, oy);
  std::vector<uint8_t> inside(grid.cell_count(), 0);
  std::string row;
  std::getline(in, row);  // consume end of header line
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(in, row) || static_cast<int>(row.size()) < nx)
      throw Error(ErrorCode::io_error, "mask row missing or too short");
    for (int i = 0; i < nx; ++i) {
      char c = row[i];
      if (c == '#')
        inside[grid.linear({i, j})] = 1;
      else if (c != '.')
        throw Error(ErrorCode::io_error, "mask rows must use '#' and '.'");
    }
  }
  return DomainMask(grid, std::move(inside));
}

void write_mask(const DomainMask& mask, const std::string& path) {
  write_text_file(path, mask_to_text(mask));
}

DomainMask read_mask(const std::string& path) { return mask_from_text(read_text_file(path)); }

std::string field_to_text(const ScalarField& f) {
  std::ostringstream out;
  out << mask_to_text(*f.mask);
  for (double v : f.values) out << format_double(v) << '\n';
  return out.str();
}

ScalarField field_from_text(const std::string& text) {
  std::istringstream in(text);
  int nx = 0, ny = 0;
  double h = 0.0, ox = 0.0, oy = 0.0;
  if (!(in >> nx >> ny >> h >> ox >> oy))
    throw Error(ErrorCode::io_error, "bad field header");
  std::ostringstream masktext;
  masktext << nx << ' ' << ny << ' ' << format_double(h) << ' ' << format_double(ox) << ' '
           << format_double(oy) << '\n';
  std::string row;
  std::getline(in, row);
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(in, row))
      throw Error(ErrorCode::io_error, "field mask row missing");
    masktext << row << '\n';
  }
  auto mask = std::make_shared<DomainMask>(mask_from_text(masktext.str()));
  std::vector<double> values(mask->interior_count());
  for (double& v : values) {
    if (!(in >> v)) throw Error(ErrorCode::io_error, "field values missing");
  }
  return ScalarField(mask, std::move(values));
}

void write_field(const ScalarField& f, const std::string& path) {
  write_text_file(path, field_to_text(f));
}

ScalarField read_field(const std::string& path) { return field_from_text(read_text_file(path)); }

PgmScale write_pgm(const ScalarField& f, const std::string& path) {
  const DomainMask& mask = *f.mask;
  const Grid2D& g = mask.grid();
  PgmScale scale{f.min(), f.max()};
  double span = scale.hi - scale.lo;
  std::ostringstream out;
  out << "P2\n" << g.nx << ' ' << g.ny << "\n255\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      int v = 0;
      int k = mask.interior_index({i, j});
      if (k >= 0)
        v = span > 0.0 ? static_cast<int>(std::lround(255.0 * (f.values[k] - scale.lo) / span))
                       : 255;
      out << v << (i + 1 == g.nx ? '\n' : ' ');
    }
  }
  write_text_file(path, out.str());
  return scale;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open for writing: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace polareig
