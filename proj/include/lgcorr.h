/*
 * lgcorr -- local-global correlation experiments on disordered energy
 * landscapes over regular graphs.
 *
 * C interface to the shared library. All functions return lgc_status;
 * outputs are written through pointer arguments. On failure, a thread-local
 * message is available via lgc_last_error(). Handles are opaque and must be
 * released with the matching *_free function. Strings returned through
 * char** arguments are owned by the caller and released with
 * lgc_string_free().
 */

#ifndef LGCORR_H
#define LGCORR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lgc_status {
  LGC_OK = 0,
  LGC_ERR_INVALID_ARGUMENT = 1,
  LGC_ERR_INVALID_STATE = 2,
  LGC_ERR_NO_CONVERGENCE = 3,
  LGC_ERR_IO = 4,
  LGC_ERR_RUNTIME = 5
} lgc_status;

/* Message describing the most recent failure on this thread; never NULL. */
const char *lgc_last_error(void);
const char *lgc_status_name(lgc_status status);

void lgc_string_free(char *str);

/* ------------------------------------------------------------------ */
/* Graphs                                                              */
/* ------------------------------------------------------------------ */

typedef struct lgc_graph lgc_graph;

lgc_status lgc_graph_complete(int32_t n, lgc_graph **out);
lgc_status lgc_graph_hypercube(int32_t dim, lgc_graph **out);
lgc_status lgc_graph_cycle(int32_t n, lgc_graph **out);
lgc_status lgc_graph_circulant(int32_t n, const int32_t *offsets, size_t num_offsets,
                               lgc_graph **out);
/* num_swap_pairs accepted double-edge swaps applied to a copy of base. */
lgc_status lgc_graph_random_regular(const lgc_graph *base, int64_t num_swap_pairs,
                                    uint64_t seed, lgc_graph **out);
void lgc_graph_free(lgc_graph *graph);

int32_t lgc_graph_num_vertices(const lgc_graph *graph);
int64_t lgc_graph_num_edges(const lgc_graph *graph);
int32_t lgc_graph_degree(const lgc_graph *graph);

typedef struct lgc_graph_diagnostics {
  int simple;
  int regular;
  int connected;
  int32_t degree;
} lgc_graph_diagnostics;

lgc_status lgc_graph_validate(const lgc_graph *graph, lgc_graph_diagnostics *out);
/* One "u v" pair per line, u < v, ascending lexicographic order. */
lgc_status lgc_graph_write_edge_list(const lgc_graph *graph, const char *path);

/* ------------------------------------------------------------------ */
/* Landscapes                                                          */
/* ------------------------------------------------------------------ */

typedef struct lgc_landscape lgc_landscape;

lgc_status lgc_landscape_sample_iid(const lgc_graph *graph, double sigma_w, double sigma_b,
                                    double sigma_f, uint64_t seed, lgc_landscape **out);
lgc_status lgc_landscape_sample_rem(const lgc_graph *graph, double lambda, double sigma_w,
                                    uint64_t seed, lgc_landscape **out);
/* Separable barriers B_ij = slope*W_i + intercept + Normal(0, sigma^2). */
lgc_status lgc_landscape_sample_separable(const lgc_graph *graph, double sigma_w,
                                          double f_slope, double f_intercept, double sigma,
                                          int symmetrize, uint64_t seed, lgc_landscape **out);
void lgc_landscape_free(lgc_landscape *landscape);

/* 1 iff the exit rates of the induced chain are not all equal. */
lgc_status lgc_landscape_nondegenerate(const lgc_landscape *landscape, int *out);
/* Canonical JSON serialization; byte-identical for identical inputs. */
lgc_status lgc_landscape_to_json(const lgc_landscape *landscape, char **json_out);

/* ------------------------------------------------------------------ */
/* Correlation report                                                  */
/* ------------------------------------------------------------------ */

typedef struct lgc_rho_report {
  double rho;
  double rho_hat;
  double r;
  double var_w;
  double var_a;
  int32_t n;
  int32_t degree;
  int degenerate;
  /* Solver that produced the effective potential: one of "closed_form",
   * "linear_solve", "power_iteration". */
  char solver[24];
} lgc_rho_report;

/* Solves for the stationary distribution (closed form when reversible) and
 * assembles the correlation report for one landscape. */
lgc_status lgc_compute_rho(const lgc_landscape *landscape, lgc_rho_report *out);

/* Per-state vectors; each buffer must hold num_vertices doubles. Any of the
 * output pointers may be NULL to skip that column. */
lgc_status lgc_state_table(const lgc_landscape *landscape, double *neg_log_pi, double *log_q,
                           double *wells, double *barrier_lse);

/* ------------------------------------------------------------------ */
/* Bound evaluators                                                    */
/* ------------------------------------------------------------------ */

/* Finite-n coefficient and lower bound 1 - 2*c_r*(sigma_b/sigma_w)^2. */
lgc_status lgc_disorder_bound(int32_t n, double sigma_b, double sigma_w, double *c_r,
                              double *bound);
/* Trap-dynamics bound 1 - 4*c_r*(1-lambda)^2. */
lgc_status lgc_locality_bound(int32_t n, double lambda, double *c_r, double *bound);

/* ------------------------------------------------------------------ */
/* Experiment entry points (JSON config in, JSON report out)           */
/* ------------------------------------------------------------------ */

/* Single trial. Config: {"graph": {...}, "mode": "iid"|"rem"|"separable",
 * "sigma_w", "sigma_b", "sigma_f", "lambda", "separable": {...},
 * "trial", "master_seed", "solver": {...}}. */
lgc_status lgc_trial_run(const char *config_json, char **record_json_out);

/* Single trial plus per-state scatter CSV and JSON sidecar. */
lgc_status lgc_trial_scatter(const char *config_json, const char *csv_path,
                             const char *sidecar_json_path, char **record_json_out);

/* Grid sweep; config additionally carries grids (arrays), "graphs" (list),
 * "trials", "workers" and "output": {"trials_csv", "aggregates_csv",
 * "summary_json"}. Returns the aggregate summary. */
lgc_status lgc_sweep_run(const char *config_json, char **summary_json_out);

/* Sweep plus lower-bound verification; *all_passed set to 0/1. */
lgc_status lgc_verify_bounds(const char *config_json, char **report_json_out, int *all_passed);

/* Monte Carlo moment suite. Config: {"graph": {...}, "sigma_w", "sigma_b",
 * "trials", "seed"}. */
lgc_status lgc_moment_suite(const char *config_json, char **report_json_out, int *all_passed);

/* Exact-event simulation and estimator comparison. Config: {"graph": {...},
 * "mode", landscape params, "seed", "start", "num_jumps", "min_visits",
 * "trajectory_csv" (optional dump path)}. */
lgc_status lgc_trajectory_run(const char *config_json, char **report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LGCORR_H */
