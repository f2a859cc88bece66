/*
 * polareig - first-eigenvalue optimization over rearrangement classes on
 * masked 2-D grids, with polarization / symmetrization diagnostics.
 *
 * C API of the shared library: opaque handles plus status codes. All
 * functions returning pe_status set a thread-local message retrievable with
 * pe_last_error() on failure.
 */
#ifndef POLAREIG_H
#define POLAREIG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pe_status {
  PE_OK = 0,
  PE_ERR_INVALID_ARGUMENT = 1,
  PE_ERR_INCOMPATIBLE = 2,   /* half-space boundary off the grid lattice */
  PE_ERR_MASK_MISMATCH = 3,
  PE_ERR_EMPTY_MASK = 4,
  PE_ERR_SHAPE = 5,
  PE_ERR_IO = 6,
  PE_ERR_CONFIG = 7,
  PE_ERR_NON_COERCIVE = 8,
  PE_ERR_SOLVER = 9,
  PE_ERR_UNKNOWN = 10
} pe_status;

typedef struct pe_mask pe_mask;
typedef struct pe_field pe_field;

const char* pe_version(void);
const char* pe_status_name(pe_status s);
/* Message for the last failing call on this thread; empty string otherwise. */
const char* pe_last_error(void);

/* ---- masks ----------------------------------------------------------- */

/* Disk of the given radius on an n x n grid centered on the origin. */
pe_status pe_mask_disk(int n, double radius, pe_mask** out);
/* B_R(0) minus the closed ball of radius r centered at (t, 0); 0 <= t < R-r. */
pe_status pe_mask_annulus(int n, double outer_r, double inner_r, double shift, pe_mask** out);
pe_status pe_mask_load(const char* path, pe_mask** out);
pe_status pe_mask_save(const pe_mask* m, const char* path);
pe_status pe_mask_dims(const pe_mask* m, int* nx, int* ny, double* h);
int       pe_mask_interior_count(const pe_mask* m);
void      pe_mask_free(pe_mask* m);

/* ---- fields (values on interior cells, scan order) ------------------- */

pe_status pe_field_constant(const pe_mask* m, double value, pe_field** out);
pe_status pe_field_from_values(const pe_mask* m, const double* values, size_t len,
                               pe_field** out);
pe_status pe_field_load(const char* path, pe_field** out);
pe_status pe_field_save(const pe_field* f, const char* path);
int       pe_field_size(const pe_field* f);
pe_status pe_field_copy_values(const pe_field* f, double* buffer, size_t len);
void      pe_field_free(pe_field* f);

/* ---- first eigenpair of -laplace(phi) + V phi = lambda g phi ---------- */

typedef struct pe_solve_opts {
  double tol;              /* relative residual tolerance (default 1e-12) */
  int max_outer;           /* power-iteration cap (default 2000) */
  int max_inner;           /* CG cap per inner solve (default 10000) */
  unsigned long long seed; /* start-vector seed (default 1) */
} pe_solve_opts;

pe_solve_opts pe_solve_opts_default(void);

/* g and v may be NULL (interpreted as g = 1 and V = 0). On success *phi is a
 * new field handle with the unit-norm positive eigenfunction. */
pe_status pe_solve_first(const pe_mask* m, const pe_field* g, const pe_field* v,
                         const pe_solve_opts* opts, double* lambda, double* residual,
                         pe_field** phi);

/* ---- scenario runner / property suite -------------------------------- */

/* Runs the scenario config at config_path, writing trace.csv, phi/g/v fields,
 * heatmaps and report.json into out_dir (default: directory named after the
 * scenario). seed_override < 0 keeps the config seed. *scenario_exit receives
 * 0 when every scenario assertion passed and 1 otherwise; config errors map
 * to PE_ERR_CONFIG and solver failures to PE_ERR_SOLVER/PE_ERR_NON_COERCIVE. */
pe_status pe_run_scenario(const char* config_path, const char* out_dir,
                          long long seed_override, int* scenario_exit);

/* Randomized invariant batteries; prints one line per battery to stdout.
 * *suite_exit receives 0 on a clean pass, 1 otherwise. */
pe_status pe_run_suite(unsigned long long seed, int counts, int* suite_exit);

/* Builds the mask described by the domain keys of a scenario config and
 * writes it in the mask file format. */
pe_status pe_generate_mask(const char* config_path, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* POLAREIG_H */
