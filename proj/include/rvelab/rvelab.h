/* Public C interface of the rvelab shared library.
 *
 * All functions return a status code (RVE_OK on success) and hand results
 * back through out parameters. Objects are opaque handles owned by the
 * caller and released with the matching _free function. Error details for
 * the calling thread are available via rve_last_error().
 */
#ifndef RVELAB_H
#define RVELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RVELAB_API __declspec(dllexport)
#else
#define RVELAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t rve_status;

enum {
  RVE_OK = 0,
  RVE_ERR_INVALID_ARGUMENT = 1,
  RVE_ERR_INVALID_SPEC = 2,
  RVE_ERR_JAMMING = 3,
  RVE_ERR_NONCONFORMING_MESH = 4,
  RVE_ERR_MESH_TOPOLOGY = 5,
  RVE_ERR_RANK_DEFICIENCY = 6,
  RVE_ERR_SINGULAR_SYSTEM = 7,
  RVE_ERR_NO_PAIR = 8,
  RVE_ERR_DEGENERATE = 9,
  RVE_ERR_NO_CRACK = 10,
  RVE_ERR_DEGENERATE_DENOMINATOR = 11,
  RVE_ERR_INADMISSIBLE_LOCALIZATION = 12,
  RVE_ERR_NO_INTERSECTION = 13,
  RVE_ERR_IO = 14,
  RVE_ERR_PARTIAL_FAILURE = 15,
  RVE_ERR_UNKNOWN = 16
};

RVELAB_API const char* rve_version(void);
RVELAB_API const char* rve_status_name(rve_status status);
/* Message of the most recent failure on the calling thread. */
RVELAB_API const char* rve_last_error(void);

/* ---------------------------------------------------------------- fibres */

typedef struct rve_microstructure rve_microstructure;

RVELAB_API rve_status rve_microstructure_generate(int32_t n_fibers, double target_vf, double l,
                                                  double b, uint64_t seed, int64_t max_attempts,
                                                  rve_microstructure** out);
RVELAB_API rve_status rve_microstructure_regular_grid(int32_t rows, int32_t cols, double r,
                                                      double l, double b, int has_pair_gap,
                                                      double pair_gap, rve_microstructure** out);
RVELAB_API rve_status rve_microstructure_read(const char* path, rve_microstructure** out);
RVELAB_API rve_status rve_microstructure_write(const rve_microstructure* m, const char* path);
RVELAB_API void rve_microstructure_free(rve_microstructure* m);

RVELAB_API int32_t rve_microstructure_fiber_count(const rve_microstructure* m);
RVELAB_API int32_t rve_microstructure_circle_count(const rve_microstructure* m);
RVELAB_API rve_status rve_microstructure_circle(const rve_microstructure* m, int32_t index,
                                                double* cx, double* cy, double* r,
                                                int32_t* ghost_of);
RVELAB_API rve_status rve_microstructure_min_freepath(const rve_microstructure* m, double load_x,
                                                      double load_y, int32_t* i, int32_t* j,
                                                      double* freepath, double* theta_deg);

/* ------------------------------------------------------------------ mesh */

typedef struct rve_mesh rve_mesh;

RVELAB_API rve_status rve_mesh_rasterize(const rve_microstructure* m, double h, rve_mesh** out);
RVELAB_API void rve_mesh_free(rve_mesh* mesh);
RVELAB_API int32_t rve_mesh_nx(const rve_mesh* mesh);
RVELAB_API int32_t rve_mesh_ny(const rve_mesh* mesh);
/* Element phases (0 matrix, 1 fibre), row-major, nx*ny entries. */
RVELAB_API rve_status rve_mesh_phases(const rve_mesh* mesh, int32_t* out, size_t capacity);
RVELAB_API rve_status rve_mesh_write_phase_csv(const rve_mesh* mesh, const char* path);

/* ----------------------------------------------------------------- solve */

typedef struct rve_solution rve_solution;

/* config_json carries mesh size, materials, regularization, boundary
 * conditions, load program, solver and snapshot options; see the project
 * README for the schema. */
RVELAB_API rve_status rve_solve(const rve_microstructure* m, const char* config_json,
                                rve_solution** out);
RVELAB_API void rve_solution_free(rve_solution* s);
RVELAB_API int64_t rve_solution_increment_count(const rve_solution* s);
/* Row layout: applied_u, reaction_sum, avg_sxx, avg_syy, avg_sxy, avg_exx,
 * avg_eyy, avg_gxy, n_damaged, max_D. */
RVELAB_API rve_status rve_solution_trace_row(const rve_solution* s, int64_t increment,
                                             double out[10]);
RVELAB_API rve_status rve_solution_crack_band_width(const rve_solution* s, double threshold,
                                                    int32_t* width_elems);
/* Writes trace.csv, curve.csv, metrics.json, snapshot_*.csv and
 * manifest.json under out_dir. */
RVELAB_API rve_status rve_solution_write_outputs(const rve_solution* s, const char* out_dir);

/* -------------------------------------------------------------- analysis */

RVELAB_API rve_status rve_c_theta(double eps0_ref, double eps0_d_only, double eps0_theta_only,
                                  double eps0_both, double* out);
RVELAB_API rve_status rve_dispersion_sd_files(const char* const* curve_paths, int32_t n_curves,
                                              double slope_fraction, double* sd,
                                              int32_t* n_excluded);
RVELAB_API rve_status rve_curve_metrics_file(const char* curve_path, double domain_length,
                                             double f_fail, double out_metrics[5],
                                             int32_t flags[2]);
RVELAB_API rve_status rve_sweep_run(const char* plan_json_path, const char* out_dir, int32_t jobs);

/* ------------------------------------------------------------ rod oracle */

RVELAB_API rve_status rve_rod_stress_analytic(double u, double L, double lambda, double E,
                                              double H, double eps0, double* sigma);

#ifdef __cplusplus
}
#endif

#endif /* RVELAB_H */
