/* SPDX-License-Identifier: Apache-2.0
 *
 * evrg - renormalization-group tools for extreme-value statistics.
 *
 * C interface to the library: opaque handles, status codes, flat arrays.
 * Every function that can fail returns an evrg_status; on failure the
 * outputs are untouched and evrg_last_error() carries a message (thread
 * local, valid until the next failing call on the same thread).
 *
 * Handles are created by *_open / evrg_* constructors and released by the
 * matching *_close; close functions ignore NULL. All handles are immutable
 * after creation and safe to share across threads.
 */
#ifndef EVRG_H
#define EVRG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EVRG_API __declspec(dllexport)
#else
#define EVRG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evrg_status {
  EVRG_OK = 0,
  EVRG_ERR_INVALID_ARGUMENT = 1,
  EVRG_ERR_UNKNOWN_ID = 2,
  EVRG_ERR_DOMAIN = 3,
  EVRG_ERR_SUPPORT_MISMATCH = 4,
  EVRG_ERR_NO_CONVERGENCE = 5,
  EVRG_ERR_EXTRACTION = 6,
  EVRG_ERR_UNSUPPORTED = 7,
  EVRG_ERR_INTERNAL = 8
} evrg_status;

typedef struct evrg_dist evrg_dist;           /* probability law */
typedef struct evrg_group evrg_group;         /* rescaling group g_s */
typedef struct evrg_expansion evrg_expansion; /* eigen-expansion (beta_i, c_i) */
typedef struct evrg_series evrg_series;       /* finite-size correction series */
typedef struct evrg_density evrg_density;     /* density with antiderivative */
typedef struct evrg_result evrg_result;       /* binned Monte Carlo histogram */

EVRG_API const char* evrg_version(void);
EVRG_API const char* evrg_status_name(evrg_status status);
EVRG_API const char* evrg_last_error(void);

/* ------------------------------------------------------------------ *
 * distributions
 *
 * ids: "tent", "valley", "salpeter", "salpeter-mass", "uniform",
 *      "fixed:<case>:alpha=<a>:lambda=<l>" with case0|case1-|case1+|case2.
 * ------------------------------------------------------------------ */
EVRG_API evrg_status evrg_dist_open(const char* id, evrg_dist** out);
EVRG_API void evrg_dist_close(evrg_dist* d);
EVRG_API evrg_status evrg_dist_support(const evrg_dist* d, double* lower, double* upper);
EVRG_API evrg_status evrg_dist_cdf(const evrg_dist* d, double x, double* out);
EVRG_API evrg_status evrg_dist_pdf(const evrg_dist* d, double x, double* out);
EVRG_API evrg_status evrg_dist_survival(const evrg_dist* d, double x, double* out);
EVRG_API evrg_status evrg_dist_quantile(const evrg_dist* d, double p, double* out);

/* ------------------------------------------------------------------ *
 * rescaling groups; ids look like "case2:alpha=2"
 * ------------------------------------------------------------------ */
EVRG_API evrg_status evrg_group_open(const char* id, evrg_group** out);
EVRG_API void evrg_group_close(evrg_group* g);
/* g_s(x); s may be negative */
EVRG_API evrg_status evrg_group_map(const evrg_group* g, double s, double x, double* out);
EVRG_API evrg_status evrg_group_generator(const evrg_group* g, double x, double* out);

/* T_{log n}: law of the rescaled maximum of n i.i.d. draws, exact. */
EVRG_API evrg_status evrg_dist_transform(const evrg_dist* d, const evrg_group* g,
                                         double n, evrg_dist** out);

/* ------------------------------------------------------------------ *
 * domain-of-attraction classification (compact supports)
 * ------------------------------------------------------------------ */
#define EVRG_MAX_PROBES 16

typedef struct evrg_verdict {
  int converges;            /* 1 when both estimates stabilized */
  double alpha;             /* NaN when absent */
  double lambda;            /* NaN when absent */
  size_t n_probes;
  double probe_x[EVRG_MAX_PROBES];
  double probe_ratio[EVRG_MAX_PROBES];
  char note[160];           /* empty on success */
} evrg_verdict;

EVRG_API evrg_status evrg_classify(const evrg_dist* d, evrg_verdict* out);

/* ------------------------------------------------------------------ *
 * perturbation theory around the compact-family fixed point
 * ------------------------------------------------------------------ */

/* Taylor coefficients of mu/M - 1 in (-log x): pairs (beta_i, c_i). */
EVRG_API evrg_status evrg_expand(const evrg_dist* d, double alpha, double lambda,
                                 int max_order, evrg_expansion** out);
EVRG_API void evrg_expansion_close(evrg_expansion* e);
EVRG_API size_t evrg_expansion_size(const evrg_expansion* e);
EVRG_API evrg_status evrg_expansion_term(const evrg_expansion* e, size_t i,
                                         double* beta, double* coeff);

/* nu_beta = n^(1 - beta/alpha) */
EVRG_API evrg_status evrg_eigenvalue(double beta, double alpha, double n, double* out);

/* Finite-size corrections up to n^(-target_order):
 * Delta_pred(n) = sum_k c_k n^(-p_k), shape delta(x, n) = sum_k delta_k(x) n^(-p_k).
 */
EVRG_API evrg_status evrg_predict(const evrg_expansion* e, double target_order,
                                  evrg_series** out);
EVRG_API void evrg_series_close(evrg_series* s);
EVRG_API size_t evrg_series_size(const evrg_series* s);
EVRG_API evrg_status evrg_series_order(const evrg_series* s, size_t k,
                                       double* exponent, double* amplitude);
EVRG_API evrg_status evrg_series_delta_term(const evrg_series* s, size_t k, double x,
                                            double* out);
EVRG_API evrg_status evrg_series_delta(const evrg_series* s, double n, double x,
                                       double* out);
EVRG_API evrg_status evrg_series_amplitude(const evrg_series* s, double n, double* out);

/* ------------------------------------------------------------------ *
 * prediction densities (for comparisons and plotting)
 * ------------------------------------------------------------------ */
EVRG_API evrg_status evrg_density_from_dist(const evrg_dist* d, evrg_density** out);
EVRG_API evrg_status evrg_density_from_series(const evrg_series* s, double n,
                                              evrg_density** out);
EVRG_API void evrg_density_close(evrg_density* d);
EVRG_API evrg_status evrg_density_value(const evrg_density* d, double x, double* out);
/* integral of the density over [lo, hi], from the exact antiderivative */
EVRG_API evrg_status evrg_density_mass(const evrg_density* d, double lo, double hi,
                                       double* out);

/* ------------------------------------------------------------------ *
 * Monte Carlo experiments
 * ------------------------------------------------------------------ */
typedef struct evrg_sim_config {
  const char* dist_id;
  uint64_t block_size; /* n */
  uint64_t replicas;   /* N */
  int bins;            /* 0 -> 50 */
  uint64_t seed;
  uint64_t chunk_size; /* 0 -> 65536; fixed chunking keeps runs reproducible */
  int workers;         /* 0 -> hardware concurrency */
} evrg_sim_config;

EVRG_API evrg_status evrg_simulate(const evrg_sim_config* config, evrg_result** out);
EVRG_API void evrg_result_close(evrg_result* r);
EVRG_API size_t evrg_result_bins(const evrg_result* r);
EVRG_API evrg_status evrg_result_bin(const evrg_result* r, size_t i, double* lo,
                                     double* hi, double* density, double* std_error);
EVRG_API evrg_status evrg_result_count(const evrg_result* r, size_t i, uint64_t* count);

/* Rebuild a result from stored bins (e.g. a CSV) for comparison. */
EVRG_API evrg_status evrg_result_from_bins(const double* lo, const double* hi,
                                           const double* density,
                                           const double* std_error, size_t bins,
                                           uint64_t block_size, uint64_t replicas,
                                           evrg_result** out);

/* Per-bin comparison against a prediction. Arrays hold evrg_result_bins(r)
 * entries; any output pointer may be NULL. l1_total gets
 * sum_b width |observed - predicted|. */
EVRG_API evrg_status evrg_compare(const evrg_result* r, const evrg_density* prediction,
                                  double scale_exponent, double* bin_mid,
                                  double* observed, double* predicted,
                                  double* scaled_residual, double* z, double* l1_total);

#ifdef __cplusplus
}
#endif

#endif /* EVRG_H */
