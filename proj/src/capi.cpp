#include "polareig.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "eigensolver.hpp"
#include "io.hpp"
#include "scenario.hpp"
#include "suite.hpp"

using namespace polareig;

struct pe_mask {
  MaskPtr mask;
};

struct pe_field {
  ScalarField field;
};

namespace {

thread_local std::string g_last_error;

pe_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_value: return PE_ERR_INVALID_ARGUMENT;
    case ErrorCode::incompatible_halfspace: return PE_ERR_INCOMPATIBLE;
    case ErrorCode::mask_mismatch:
    case ErrorCode::non_invariant_mask: return PE_ERR_MASK_MISMATCH;
    case ErrorCode::empty_mask: return PE_ERR_EMPTY_MASK;
    case ErrorCode::shape_error: return PE_ERR_SHAPE;
    case ErrorCode::io_error: return PE_ERR_IO;
    case ErrorCode::config_error: return PE_ERR_CONFIG;
    case ErrorCode::non_coercive: return PE_ERR_NON_COERCIVE;
    case ErrorCode::no_positive_direction:
    case ErrorCode::non_convergence:
    case ErrorCode::positivity_failure: return PE_ERR_SOLVER;
  }
  return PE_ERR_UNKNOWN;
}

template <typename Fn>
pe_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PE_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return PE_ERR_UNKNOWN;
  }
}

pe_status require(bool cond, const char* message) {
  if (cond) return PE_OK;
  g_last_error = message;
  return PE_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* pe_version(void) { return "0.1.0"; }

const char* pe_status_name(pe_status s) {
  switch (s) {
    case PE_OK: return "ok";
    case PE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PE_ERR_INCOMPATIBLE: return "incompatible half-space";
    case PE_ERR_MASK_MISMATCH: return "mask mismatch";
    case PE_ERR_EMPTY_MASK: return "empty mask";
    case PE_ERR_SHAPE: return "shape error";
    case PE_ERR_IO: return "io error";
    case PE_ERR_CONFIG: return "config error";
    case PE_ERR_NON_COERCIVE: return "non-coercive potential";
    case PE_ERR_SOLVER: return "solver error";
    default: return "unknown error";
  }
}

const char* pe_last_error(void) { return g_last_error.c_str(); }

pe_status pe_mask_disk(int n, double radius, pe_mask** out) {
  if (pe_status s = require(out != nullptr, "out mask is null"); s != PE_OK) return s;
  return guarded([&]() {
    Grid2D grid = make_centered_grid(n, radius);
    auto mask = std::make_shared<const DomainMask>(make_disk_mask(grid, grid.middle(), radius));
    *out = new pe_mask{std::move(mask)};
    return PE_OK;
  });
}

pe_status pe_mask_annulus(int n, double outer_r, double inner_r, double shift, pe_mask** out) {
  if (pe_status s = require(out != nullptr, "out mask is null"); s != PE_OK) return s;
  return guarded([&]() {
    Grid2D grid = make_centered_grid(n, outer_r);
    auto mask =
        std::make_shared<const DomainMask>(make_annulus_mask(grid, outer_r, inner_r, shift));
    *out = new pe_mask{std::move(mask)};
    return PE_OK;
  });
}

pe_status pe_mask_load(const char* path, pe_mask** out) {
  if (pe_status s = require(out && path, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    auto mask = std::make_shared<const DomainMask>(read_mask(path));
    *out = new pe_mask{std::move(mask)};
    return PE_OK;
  });
}

pe_status pe_mask_save(const pe_mask* m, const char* path) {
  if (pe_status s = require(m && path, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    write_mask(*m->mask, path);
    return PE_OK;
  });
}

pe_status pe_mask_dims(const pe_mask* m, int* nx, int* ny, double* h) {
  if (pe_status s = require(m != nullptr, "null mask"); s != PE_OK) return s;
  if (nx) *nx = m->mask->grid().nx;
  if (ny) *ny = m->mask->grid().ny;
  if (h) *h = m->mask->grid().h;
  return PE_OK;
}

int pe_mask_interior_count(const pe_mask* m) {
  return m ? m->mask->interior_count() : 0;
}

void pe_mask_free(pe_mask* m) { delete m; }

pe_status pe_field_constant(const pe_mask* m, double value, pe_field** out) {
  if (pe_status s = require(m && out, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    *out = new pe_field{ScalarField::constant(m->mask, value)};
    return PE_OK;
  });
}

pe_status pe_field_from_values(const pe_mask* m, const double* values, size_t len,
                               pe_field** out) {
  if (pe_status s = require(m && values && out, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    std::vector<double> v(values, values + len);
    *out = new pe_field{ScalarField(m->mask, std::move(v))};
    return PE_OK;
  });
}

pe_status pe_field_load(const char* path, pe_field** out) {
  if (pe_status s = require(path && out, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    *out = new pe_field{read_field(path)};
    return PE_OK;
  });
}

pe_status pe_field_save(const pe_field* f, const char* path) {
  if (pe_status s = require(f && path, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    write_field(f->field, path);
    return PE_OK;
  });
}

int pe_field_size(const pe_field* f) { return f ? f->field.size() : 0; }

pe_status pe_field_copy_values(const pe_field* f, double* buffer, size_t len) {
  if (pe_status s = require(f && buffer, "null argument"); s != PE_OK) return s;
  if (pe_status s = require(len >= f->field.values.size(), "buffer too small"); s != PE_OK)
    return s;
  std::memcpy(buffer, f->field.values.data(), f->field.values.size() * sizeof(double));
  return PE_OK;
}

void pe_field_free(pe_field* f) { delete f; }

pe_solve_opts pe_solve_opts_default(void) {
  EigenOptions d;
  return pe_solve_opts{d.tol, d.max_outer, d.max_inner, d.seed};
}

pe_status pe_solve_first(const pe_mask* m, const pe_field* g, const pe_field* v,
                         const pe_solve_opts* opts, double* lambda, double* residual,
                         pe_field** phi) {
  if (pe_status s = require(m != nullptr, "null mask"); s != PE_OK) return s;
  return guarded([&]() {
    ScalarField gv = g ? g->field : ScalarField::constant(m->mask, 1.0);
    ScalarField vv = v ? v->field : ScalarField::constant(m->mask, 0.0);
    auto [A, B] = assemble(m->mask, vv, gv);
    coercivity_check(A);
    EigenOptions eo;
    if (opts) {
      eo.tol = opts->tol;
      eo.max_outer = opts->max_outer;
      eo.max_inner = opts->max_inner;
      eo.seed = opts->seed;
    }
    EigenResult res = solve_first(A, B, eo);
    if (lambda) *lambda = res.lambda;
    if (residual) *residual = res.residual;
    if (phi) *phi = new pe_field{std::move(res.phi)};
    return PE_OK;
  });
}

pe_status pe_run_scenario(const char* config_path, const char* out_dir, long long seed_override,
                          int* scenario_exit) {
  if (pe_status s = require(config_path != nullptr, "null config path"); s != PE_OK) return s;
  return guarded([&]() {
    Scenario sc = load_scenario(config_path);
    std::string dir = out_dir && *out_dir ? out_dir : sc.name + "_out";
    std::optional<uint64_t> seed;
    if (seed_override >= 0) seed = static_cast<uint64_t>(seed_override);
    ScenarioOutcome outcome = run_scenario(sc, dir, seed);
    if (scenario_exit) *scenario_exit = outcome.exit_code;
    return PE_OK;
  });
}

pe_status pe_run_suite(unsigned long long seed, int counts, int* suite_exit) {
  return guarded([&]() {
    SuiteOptions opts;
    opts.seed = seed;
    opts.counts = counts;
    SuiteResult res = run_property_suite(opts);
    std::fputs(res.table.c_str(), stdout);
    if (suite_exit) *suite_exit = res.exit_code;
    return PE_OK;
  });
}

pe_status pe_generate_mask(const char* config_path, const char* out_path) {
  if (pe_status s = require(config_path && out_path, "null argument"); s != PE_OK) return s;
  return guarded([&]() {
    Scenario sc = load_scenario(config_path);
    DomainMask mask = build_scenario_mask(sc);
    write_mask(mask, out_path);
    return PE_OK;
  });
}

}  // extern "C"
