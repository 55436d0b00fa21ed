/*
 * C interface to the streaming sparse additive time-series library.
 *
 * All objects are opaque handles. Every fallible call returns a
 * slants_status; on failure slants_last_error() describes the problem for
 * the calling thread. Indices are 0-based.
 */
#ifndef SLANTS_H
#define SLANTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(SLANTS_BUILDING_LIBRARY)
#define SLANTS_API __attribute__((visibility("default")))
#else
#define SLANTS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slants_status {
  SLANTS_OK = 0,
  SLANTS_ERR_INVALID_ARGUMENT = 1,
  SLANTS_ERR_DIMENSION = 2,
  SLANTS_ERR_INSUFFICIENT_DATA = 3,
  SLANTS_ERR_DEGENERATE = 4,
  SLANTS_ERR_NOT_INITIALIZED = 5,
  SLANTS_ERR_UNDERDETERMINED = 6,
  SLANTS_ERR_NUMERICAL = 7,
  SLANTS_ERR_IO = 8,
  SLANTS_ERR_FORMAT = 9,
  SLANTS_ERR_NOT_CONVERGED = 10,
  SLANTS_ERR_BUFFER_TOO_SMALL = 11,
  SLANTS_ERR_INTERNAL = 99
} slants_status;

typedef enum slants_schedule {
  SLANTS_SCHEDULE_HARMONIC = 0, /* gamma_t = 1/t */
  SLANTS_SCHEDULE_CONSTANT = 1  /* gamma_t = gamma */
} slants_schedule;

typedef struct slants_config {
  size_t dim;
  size_t target;
  size_t max_lag;
  size_t basis_size;
  int degree;
  double q_lo;
  double q_hi;
  size_t warmup; /* 0: max(50, 5 * basis_size) */
  int schedule;  /* slants_schedule */
  double gamma;  /* step size of the constant schedule */
  double delta;
  double nu;
  size_t window;
  int sliding_window; /* 0: tumbling windows */
  size_t em_iters;
  double rel_tol;
  double lambda0; /* 0: automatic */
  double lambda0_scale;
  double tau0; /* 0: automatic */
  double tau_scale;
  double tau_shrink;
} slants_config;

typedef struct slants_step {
  int predicted; /* 0 while warming up */
  size_t t;
  double y;
  double yhat;
  double err; /* squared one-step error */
  double lambda;
  double tau;
  double err_lo;
  double err_mid;
  double err_hi;
} slants_step;

typedef struct slants_model_info {
  size_t dim;
  size_t target;
  size_t max_lag;
  size_t basis_size;
  size_t num_covariates;
  size_t num_coefficients;
  int warmed_up;
  size_t t;
  double lambda;
  double tau;
} slants_model_info;

typedef enum slants_scaling_method {
  SLANTS_METHOD_STREAMING = 0,
  SLANTS_METHOD_BATCH_RERUN = 1
} slants_scaling_method;

typedef struct slants_scaling_row {
  size_t T;
  double mean_seconds;
  double stderr_seconds;
  int method; /* slants_scaling_method */
} slants_scaling_row;

typedef struct slants_model slants_model;
typedef struct slants_ar slants_ar;

SLANTS_API const char* slants_version(void);
SLANTS_API const char* slants_last_error(void);
SLANTS_API const char* slants_status_string(slants_status status);

/* Streaming model ------------------------------------------------------- */

SLANTS_API void slants_config_default(slants_config* config);
SLANTS_API slants_status slants_model_create(const slants_config* config, slants_model** out);
SLANTS_API void slants_model_destroy(slants_model* model);

/* Feeds one observation of length config.dim. */
SLANTS_API slants_status slants_model_push(slants_model* model, const double* x, size_t len,
                                           slants_step* out);
SLANTS_API slants_status slants_model_get_info(const slants_model* model, slants_model_info* out);

/* Covariate c corresponds to dimension c / max_lag at lag c % max_lag + 1. */
SLANTS_API slants_status slants_model_active_set(const slants_model* model, size_t* out, size_t cap,
                                                 size_t* count);
SLANTS_API slants_status slants_model_group_norm(const slants_model* model, size_t covariate,
                                                 double* out);
SLANTS_API slants_status slants_model_coefficients(const slants_model* model, double* out, size_t cap,
                                                   size_t* count);
/* Samples f_c on `points` equally spaced values over [lo, hi]; NULL bounds
 * select the knot domain. *written is 0 for degenerate covariates. */
SLANTS_API slants_status slants_model_component(const slants_model* model, size_t covariate,
                                                size_t points, const double* lo, const double* hi,
                                                double* x_out, double* f_out, size_t* written);

/* Snapshots hold one or more models. */
SLANTS_API slants_status slants_snapshot_save(const slants_model* const* models, size_t n,
                                              const char* path);
SLANTS_API slants_status slants_snapshot_load(const char* path, slants_model** models, size_t cap,
                                              size_t* count);

/* DOT causality graph from one model per target dimension. Writes at most
 * cap bytes including the terminator; *needed receives the full size. */
SLANTS_API slants_status slants_graph_dot(const slants_model* const* models, size_t n,
                                          double group_norm_floor, char* buf, size_t cap,
                                          size_t* needed);

/* Step 2 ----------------------------------------------------------------- */

/* Backward selection on the samples with time index greater than t1.
 * series is row-major T x dim. */
SLANTS_API slants_status slants_backward_select(const double* series, size_t T, size_t dim,
                                                size_t target, size_t max_lag,
                                                const size_t* candidates, size_t n_candidates,
                                                size_t t1, double zeta, int degree,
                                                size_t* selected, size_t* n_selected);

/* Synthetic data and benchmarks ------------------------------------------ */

/* experiment: 1 stationary, 2 change point, 3 network, 4 scaling. With
 * out == NULL only *dim is reported; otherwise cap >= T * dim is required.
 * noise_scale sets the innovation standard deviation of experiment 3;
 * values <= 0 keep the default of 0.8. */
SLANTS_API slants_status slants_generate(int experiment, size_t T, uint64_t seed, double noise_scale,
                                         double* out, size_t cap, size_t* dim);

SLANTS_API slants_status slants_scaling(const size_t* T_values, size_t n, size_t repeats,
                                        uint64_t seed, int include_batch, slants_scaling_row* rows,
                                        size_t cap, size_t* count);

/* AR(p) baseline ---------------------------------------------------------- */

SLANTS_API slants_status slants_ar_create(size_t order, slants_ar** out);
SLANTS_API void slants_ar_destroy(slants_ar* ar);
SLANTS_API slants_status slants_ar_predict(const slants_ar* ar, double* out);
SLANTS_API slants_status slants_ar_update(slants_ar* ar, double y);

#ifdef __cplusplus
}
#endif

#endif /* SLANTS_H */
