#include "slants/slants.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "slants/ar_baseline.hpp"
#include "slants/error.hpp"
#include "slants/scaling.hpp"
#include "slants/selection.hpp"
#include "slants/stream.hpp"
#include "slants/synthetic.hpp"

struct slants_model {
  slants::StreamFitter fitter;
};

struct slants_ar {
  slants::ArBaseline ar;
};

namespace {

thread_local std::string last_error;

slants_status to_status(slants::ErrorCode code) {
  using slants::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return SLANTS_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return SLANTS_ERR_DIMENSION;
    case ErrorCode::insufficient_data: return SLANTS_ERR_INSUFFICIENT_DATA;
    case ErrorCode::degenerate_covariate: return SLANTS_ERR_DEGENERATE;
    case ErrorCode::not_initialized: return SLANTS_ERR_NOT_INITIALIZED;
    case ErrorCode::underdetermined: return SLANTS_ERR_UNDERDETERMINED;
    case ErrorCode::numerical_failure: return SLANTS_ERR_NUMERICAL;
    case ErrorCode::io_error: return SLANTS_ERR_IO;
    case ErrorCode::format_error: return SLANTS_ERR_FORMAT;
    case ErrorCode::not_converged: return SLANTS_ERR_NOT_CONVERGED;
  }
  return SLANTS_ERR_INTERNAL;
}

slants_status fail(slants_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
slants_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const slants::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SLANTS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SLANTS_ERR_INTERNAL, e.what());
  }
}

#define SLANTS_REQUIRE(cond, msg) \
  do {                            \
    if (!(cond)) return fail(SLANTS_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

slants::StreamConfig from_c(const slants_config& c) {
  slants::StreamConfig s;
  s.dim = c.dim;
  s.target = c.target;
  s.max_lag = c.max_lag;
  s.basis_size = c.basis_size;
  s.degree = c.degree;
  s.q_lo = c.q_lo;
  s.q_hi = c.q_hi;
  s.warmup = c.warmup;
  if (c.schedule == SLANTS_SCHEDULE_HARMONIC) {
    s.schedule = slants::WeightSchedule::harmonic();
  } else if (c.schedule == SLANTS_SCHEDULE_CONSTANT) {
    s.schedule = slants::WeightSchedule::constant(c.gamma);
  } else {
    throw slants::Error(slants::ErrorCode::invalid_argument, "unknown weight schedule");
  }
  s.channels.delta = c.delta;
  s.channels.nu = c.nu;
  s.channels.window = c.window;
  s.channels.mode = c.sliding_window ? slants::WindowMode::sliding : slants::WindowMode::tumbling;
  s.em_iters = c.em_iters;
  s.rel_tol = c.rel_tol;
  s.lambda0 = c.lambda0;
  s.lambda0_scale = c.lambda0_scale;
  s.tau0 = c.tau0;
  s.tau_scale = c.tau_scale;
  s.tau_shrink = c.tau_shrink;
  return s;
}

}  // namespace

extern "C" {

const char* slants_version(void) { return "1.0.0"; }

const char* slants_last_error(void) { return last_error.c_str(); }

const char* slants_status_string(slants_status status) {
  switch (status) {
    case SLANTS_OK: return "ok";
    case SLANTS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SLANTS_ERR_DIMENSION: return "dimension mismatch";
    case SLANTS_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case SLANTS_ERR_DEGENERATE: return "degenerate covariate";
    case SLANTS_ERR_NOT_INITIALIZED: return "not initialized";
    case SLANTS_ERR_UNDERDETERMINED: return "underdetermined";
    case SLANTS_ERR_NUMERICAL: return "numerical failure";
    case SLANTS_ERR_IO: return "i/o error";
    case SLANTS_ERR_FORMAT: return "format error";
    case SLANTS_ERR_NOT_CONVERGED: return "not converged";
    case SLANTS_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case SLANTS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void slants_config_default(slants_config* config) {
  if (!config) return;
  const slants::StreamConfig d;
  *config = slants_config{};
  config->dim = d.dim;
  config->target = d.target;
  config->max_lag = d.max_lag;
  config->basis_size = d.basis_size;
  config->degree = d.degree;
  config->q_lo = d.q_lo;
  config->q_hi = d.q_hi;
  config->warmup = d.warmup;
  config->schedule = SLANTS_SCHEDULE_HARMONIC;
  config->gamma = 0.01;
  config->delta = d.channels.delta;
  config->nu = d.channels.nu;
  config->window = d.channels.window;
  config->sliding_window = 0;
  config->em_iters = d.em_iters;
  config->rel_tol = d.rel_tol;
  config->lambda0 = d.lambda0;
  config->lambda0_scale = d.lambda0_scale;
  config->tau0 = d.tau0;
  config->tau_scale = d.tau_scale;
  config->tau_shrink = d.tau_shrink;
}

slants_status slants_model_create(const slants_config* config, slants_model** out) {
  SLANTS_REQUIRE(config && out, "null argument");
  return guarded([&] {
    *out = new slants_model{slants::StreamFitter(from_c(*config))};
    return SLANTS_OK;
  });
}

void slants_model_destroy(slants_model* model) { delete model; }

slants_status slants_model_push(slants_model* model, const double* x, size_t len, slants_step* out) {
  SLANTS_REQUIRE(model && x, "null argument");
  return guarded([&] {
    const auto step = model->fitter.push({x, len});
    if (out) {
      *out = slants_step{step.predicted ? 1 : 0, step.t,      step.y,
                         step.yhat,              step.err,    step.lambda,
                         step.tau,               step.channel_errors[0], step.channel_errors[1],
                         step.channel_errors[2]};
    }
    return SLANTS_OK;
  });
}

slants_status slants_model_get_info(const slants_model* model, slants_model_info* out) {
  SLANTS_REQUIRE(model && out, "null argument");
  const auto& f = model->fitter;
  const auto& c = f.config();
  *out = slants_model_info{c.dim,
                           c.target,
                           c.max_lag,
                           c.basis_size,
                           f.num_covariates(),
                           f.layout().dimension(),
                           f.warmed_up() ? 1 : 0,
                           f.time(),
                           f.warmed_up() ? f.lambda() : 0.0,
                           f.warmed_up() ? f.tau() : 0.0};
  return SLANTS_OK;
}

slants_status slants_model_active_set(const slants_model* model, size_t* out, size_t cap, size_t* count) {
  SLANTS_REQUIRE(model && count, "null argument");
  const auto active = model->fitter.active_set();
  *count = active.size();
  if (out == nullptr) return SLANTS_OK;
  if (cap < active.size()) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "active set buffer too small");
  std::copy(active.begin(), active.end(), out);
  return SLANTS_OK;
}

slants_status slants_model_group_norm(const slants_model* model, size_t covariate, double* out) {
  SLANTS_REQUIRE(model && out, "null argument");
  SLANTS_REQUIRE(covariate < model->fitter.num_covariates(), "covariate index out of range");
  *out = model->fitter.coefficients().group_norm(covariate);
  return SLANTS_OK;
}

slants_status slants_model_coefficients(const slants_model* model, double* out, size_t cap, size_t* count) {
  SLANTS_REQUIRE(model && count, "null argument");
  const auto& v = model->fitter.coefficients().values();
  *count = static_cast<size_t>(v.size());
  if (out == nullptr) return SLANTS_OK;
  if (cap < *count) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "coefficient buffer too small");
  std::copy(v.data(), v.data() + v.size(), out);
  return SLANTS_OK;
}

slants_status slants_model_component(const slants_model* model, size_t covariate, size_t points,
                                     const double* lo, const double* hi, double* x_out, double* f_out,
                                     size_t* written) {
  SLANTS_REQUIRE(model && x_out && f_out && written, "null argument");
  return guarded([&] {
    std::optional<double> a;
    std::optional<double> b;
    if (lo) a = *lo;
    if (hi) b = *hi;
    const auto curve = model->fitter.component(covariate, points, a, b);
    std::copy(curve.x.begin(), curve.x.end(), x_out);
    std::copy(curve.f.begin(), curve.f.end(), f_out);
    *written = curve.x.size();
    return SLANTS_OK;
  });
}

slants_status slants_snapshot_save(const slants_model* const* models, size_t n, const char* path) {
  SLANTS_REQUIRE(models && path, "null argument");
  return guarded([&] {
    std::vector<const slants::StreamFitter*> fitters;
    for (size_t i = 0; i < n; ++i) {
      if (!models[i]) return fail(SLANTS_ERR_INVALID_ARGUMENT, "null model");
      fitters.push_back(&models[i]->fitter);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return fail(SLANTS_ERR_IO, std::string("cannot open ") + path);
    slants::save_snapshot(out, fitters);
    return SLANTS_OK;
  });
}

slants_status slants_snapshot_load(const char* path, slants_model** models, size_t cap, size_t* count) {
  SLANTS_REQUIRE(path && count, "null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(SLANTS_ERR_IO, std::string("cannot open ") + path);
    auto fitters = slants::load_snapshot(in);
    *count = fitters.size();
    if (models == nullptr) return SLANTS_OK;
    if (cap < fitters.size()) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "model buffer too small");
    for (size_t i = 0; i < fitters.size(); ++i) models[i] = new slants_model{std::move(fitters[i])};
    return SLANTS_OK;
  });
}

slants_status slants_graph_dot(const slants_model* const* models, size_t n, double group_norm_floor, char* buf,
                               size_t cap, size_t* needed) {
  SLANTS_REQUIRE(models && needed, "null argument");
  return guarded([&] {
    std::vector<slants::Coefficients> per_target;
    size_t max_lag = 0;
    for (size_t i = 0; i < n; ++i) {
      if (!models[i]) return fail(SLANTS_ERR_INVALID_ARGUMENT, "null model");
      const auto& f = models[i]->fitter;
      if (max_lag == 0) max_lag = f.config().max_lag;
      if (f.config().max_lag != max_lag) return fail(SLANTS_ERR_DIMENSION, "models use different lag orders");
      per_target.push_back(f.coefficients());
    }
    if (max_lag == 0) max_lag = 1;
    const std::string dot = slants::extract_graph(per_target, max_lag, group_norm_floor).to_dot();
    *needed = dot.size() + 1;
    if (buf == nullptr) return SLANTS_OK;
    if (cap < dot.size() + 1) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "graph buffer too small");
    std::memcpy(buf, dot.c_str(), dot.size() + 1);
    return SLANTS_OK;
  });
}

slants_status slants_backward_select(const double* series, size_t T, size_t dim, size_t target, size_t max_lag,
                                     const size_t* candidates, size_t n_candidates, size_t t1, double zeta,
                                     int degree, size_t* selected, size_t* n_selected) {
  SLANTS_REQUIRE(series && n_selected && (candidates || n_candidates == 0), "null argument");
  return guarded([&] {
    slants::SeriesWindow window(dim, max_lag);
    std::vector<slants::RegressionSample> samples;
    for (size_t t = 0; t < T; ++t) {
      auto s = window.push({series + t * dim, dim}, target);
      if (s && s->t > t1) samples.push_back(std::move(*s));
    }
    for (size_t i = 0; i < n_candidates; ++i) {
      if (candidates[i] >= window.num_covariates()) {
        return fail(SLANTS_ERR_INVALID_ARGUMENT, "candidate covariate out of range");
      }
    }
    slants::BackwardOptions options;
    options.zeta = zeta;
    options.degree = degree;
    const auto result = slants::backward_select(
        samples, std::vector<size_t>(candidates, candidates + n_candidates), t1, options);
    *n_selected = result.selected.size();
    if (selected) std::copy(result.selected.begin(), result.selected.end(), selected);
    return SLANTS_OK;
  });
}

slants_status slants_generate(int experiment, size_t T, uint64_t seed, double noise_scale, double* out, size_t cap,
                              size_t* dim) {
  SLANTS_REQUIRE(dim, "null argument");
  SLANTS_REQUIRE(experiment >= 1 && experiment <= 4, "experiment must be 1, 2, 3 or 4");
  return guarded([&] {
    const auto id = static_cast<slants::Experiment>(experiment);
    *dim = id == slants::Experiment::network ? 9 : 2;
    if (out == nullptr) return SLANTS_OK;
    if (cap < T * *dim) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "series buffer too small");
    slants::SyntheticSpec spec;
    spec.id = id;
    spec.T = T;
    spec.seed = seed;
    if (noise_scale > 0.0) spec.network_noise = noise_scale;
    const auto series = slants::gen_experiment(spec);
    std::copy(series.values.begin(), series.values.end(), out);
    return SLANTS_OK;
  });
}

slants_status slants_scaling(const size_t* T_values, size_t n, size_t repeats, uint64_t seed, int include_batch,
                             slants_scaling_row* rows, size_t cap, size_t* count) {
  SLANTS_REQUIRE(count && (T_values || n == 0), "null argument");
  return guarded([&] {
    slants::ScalingOptions options;
    options.repeats = repeats;
    options.seed = seed;
    options.include_batch = include_batch != 0;
    const auto result = slants::scaling_harness(std::span<const size_t>(T_values, n), options);
    *count = result.size();
    if (rows == nullptr) return SLANTS_OK;
    if (cap < result.size()) return fail(SLANTS_ERR_BUFFER_TOO_SMALL, "row buffer too small");
    for (size_t i = 0; i < result.size(); ++i) {
      rows[i] = slants_scaling_row{result[i].T, result[i].mean_seconds, result[i].stderr_seconds,
                                   result[i].method == "slants" ? SLANTS_METHOD_STREAMING
                                                                : SLANTS_METHOD_BATCH_RERUN};
    }
    return SLANTS_OK;
  });
}

slants_status slants_ar_create(size_t order, slants_ar** out) {
  SLANTS_REQUIRE(out, "null argument");
  return guarded([&] {
    *out = new slants_ar{slants::ArBaseline(order)};
    return SLANTS_OK;
  });
}

void slants_ar_destroy(slants_ar* ar) { delete ar; }

slants_status slants_ar_predict(const slants_ar* ar, double* out) {
  SLANTS_REQUIRE(ar && out, "null argument");
  *out = ar->ar.predict();
  return SLANTS_OK;
}

slants_status slants_ar_update(slants_ar* ar, double y) {
  SLANTS_REQUIRE(ar, "null argument");
  ar->ar.update(y);
  return SLANTS_OK;
}

}  // extern "C"
