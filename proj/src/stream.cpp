#include "slants/stream.hpp"

#include <algorithm>
#include <cmath>

#include "slants/error.hpp"

namespace slants {

std::size_t StreamConfig::effective_warmup() const noexcept {
  return warmup > 0 ? warmup : std::max<std::size_t>(50, 5 * basis_size);
}

void StreamConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::invalid_argument, what); };
  if (dim == 0) fail("dimension must be positive");
  if (target >= dim) fail("target index out of range");
  if (max_lag == 0) fail("lag order must be positive");
  if (degree < 0) fail("spline degree must be nonnegative");
  if (basis_size <= static_cast<std::size_t>(degree)) fail("basis size must exceed the spline degree");
  if (!(q_lo > 0.0 && q_lo < 0.5) || !(q_hi > 0.5 && q_hi < 1.0)) {
    fail("quantile levels must satisfy 0 < q_lo < 0.5 < q_hi < 1");
  }
  if (schedule.kind == WeightSchedule::Kind::constant && !(schedule.c > 0.0 && schedule.c < 1.0)) {
    fail("constant step size must lie in (0, 1)");
  }
  if (!(channels.delta > 1.0)) fail("delta must exceed 1");
  if (!(channels.nu >= 1.0)) fail("nu must be at least 1");
  if (channels.window == 0) fail("comparison window must be positive");
  if (em_iters == 0) fail("EM iteration count must be positive");
  if (!(rel_tol > 0.0)) fail("relative tolerance must be positive");
  if (lambda0 < 0.0 || !(lambda0_scale > 0.0)) fail("lambda initialization must be positive");
  if (tau0 < 0.0 || !(tau_scale > 0.0)) fail("tau initialization must be positive");
  if (!(tau_shrink > 0.0 && tau_shrink < 1.0)) fail("tau shrink factor must lie in (0, 1)");
}

StreamFitter::StreamFitter(StreamConfig config)
    : config_(config), window_((config.validate(), config.dim), config.max_lag) {
  const GroupLayout lay = layout();
  for (auto& b : beta_) b = Coefficients(lay);
  splines_.resize(lay.groups);
  stats_ = SufficientStats(lay.dimension());
  row_.assign(lay.dimension(), 0.0);
}

StepOutput StreamFitter::push(std::span<const double> observation) {
  StepOutput out;
  auto sample = window_.push(observation, config_.target);
  out.t = window_.time();
  out.y = observation[config_.target];
  out.lambda = warmed_up_ ? channels_.center() : 0.0;
  out.tau = warmed_up_ ? tau_.tau() : 0.0;
  if (!sample) return out;

  if (!warmed_up_) {
    warmup_samples_.push_back(std::move(*sample));
    if (warmup_samples_.size() >= config_.effective_warmup()) finish_warmup();
    out.lambda = warmed_up_ ? channels_.center() : 0.0;
    out.tau = warmed_up_ ? tau_.tau() : 0.0;
    return out;
  }

  std::array<double, 3> errors{};
  double yhat = 0.0;
  absorb(*sample, &errors, &yhat);
  run_channels(config_.em_iters);

  const auto decision = channels_.step(errors, stats_.t);
  if (decision.decided) {
    const auto w = static_cast<std::size_t>(decision.winner);
    for (std::size_t c = 0; c < 3; ++c) {
      if (c == w) continue;
      beta_[c] = beta_[w];
      monitors_[c] = monitors_[w];
    }
  }

  out.predicted = true;
  out.yhat = yhat;
  out.err = errors[LambdaChannels::mid];
  out.lambda = channels_.center();
  out.tau = tau_.tau();
  out.channel_errors = channels_.windowed_errors();
  return out;
}

void StreamFitter::finish_warmup() {
  const std::size_t n_cov = window_.num_covariates();
  std::vector<double> column(warmup_samples_.size());
  for (std::size_t i = 0; i < n_cov; ++i) {
    for (std::size_t s = 0; s < warmup_samples_.size(); ++s) column[s] = warmup_samples_[s].covariates[i];
    try {
      splines_[i].basis = make_knots(column, config_.basis_size, config_.degree, config_.q_lo, config_.q_hi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_covariate) throw;
      splines_[i].basis.reset();
    }
    splines_[i].centering = CenteringState{};
  }

  stats_ = SufficientStats(layout().dimension());
  for (const auto& s : warmup_samples_) absorb(s, nullptr, nullptr);

  double tau = config_.tau0;
  if (!(tau > 0.0)) {
    const double top = max_eigenvalue(stats_.A);
    tau = top > 0.0 ? config_.tau_scale / std::sqrt(top) : 1.0;
  }
  tau_ = TauManager(tau, config_.tau_shrink);

  double lambda = config_.lambda0;
  if (!(lambda > 0.0)) {
    double max_norm = 0.0;
    const GroupLayout lay = layout();
    for (std::size_t g = 0; g < lay.groups; ++g) {
      max_norm = std::max(max_norm, stats_.B.segment(static_cast<Eigen::Index>(lay.offset(g)),
                                                     static_cast<Eigen::Index>(lay.group_size))
                                        .norm());
    }
    lambda = max_norm > 0.0 ? config_.lambda0_scale * max_norm : 1.0;
  }
  channels_ = LambdaChannels(lambda, config_.channels,
                             config_.schedule.kind == WeightSchedule::Kind::harmonic);

  warmed_up_ = true;
  warmup_samples_.clear();
  warmup_samples_.shrink_to_fit();
  run_channels(config_.warmup_em_iters);
}

void StreamFitter::absorb(const RegressionSample& sample,
                          std::array<double, 3>* errors, double* yhat) {
  std::vector<double> raw(config_.basis_size);
  for (std::size_t i = 0; i < splines_.size(); ++i) {
    auto& cs = splines_[i];
    if (!cs.active()) continue;
    cs.basis->eval(sample.covariates[i], raw);
    update_centering(cs.centering, raw);
  }
  design_row(sample, splines_, config_.basis_size, row_);
  if (errors) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double pred = predict(beta_[c], row_);
      const double e = sample.y - pred;
      (*errors)[c] = e * e;
      if (c == LambdaChannels::mid && yhat) *yhat = pred;
    }
  }
  update_stats(stats_, row_, sample.y, next_gamma(config_.schedule, stats_.t + 1));
}

void StreamFitter::run_channels(std::size_t em_iters) {
  const auto saved = beta_;
  for (;;) {
    const auto lambdas = channels_.lambdas();
    bool diverged = false;
    for (std::size_t c = 0; c < 3 && !diverged; ++c) {
      const EmConfig cfg{tau_.tau(), lambdas[c], em_iters, config_.rel_tol};
      EmResult res = em_iterate(stats_, beta_[c], cfg, &monitors_[c]);
      if (res.diverged) {
        diverged = true;
      } else {
        beta_[c] = std::move(res.beta);
      }
    }
    if (!diverged) return;
    tau_.on_divergence();
    beta_ = saved;
    for (auto& m : monitors_) m.reset();
  }
}

std::vector<std::size_t> StreamFitter::active_set() const {
  std::vector<std::size_t> out;
  const auto& beta = coefficients();
  for (std::size_t g = 0; g < beta.layout().groups; ++g) {
    if (beta.group_active(g)) out.push_back(g);
  }
  return out;
}

ComponentCurve StreamFitter::component(std::size_t covariate, std::size_t points,
                                       std::optional<double> lo, std::optional<double> hi) const {
  if (covariate >= splines_.size()) throw Error(ErrorCode::invalid_argument, "covariate index out of range");
  ComponentCurve curve;
  curve.covariate = covariate;
  const auto& cs = splines_[covariate];
  if (!warmed_up_ || !cs.active() || points == 0) return curve;
  const double a = lo.value_or(cs.basis->lo());
  const double b = hi.value_or(cs.basis->hi());
  const auto coef = coefficients().group(covariate);
  std::vector<double> values(config_.basis_size);
  curve.x.resize(points);
  curve.f.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double x =
        points == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
    centered_eval(*cs.basis, cs.centering, x, values);
    double f = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) f += coef[static_cast<Eigen::Index>(j)] * values[j];
    curve.x[k] = x;
    curve.f[k] = f;
  }
  return curve;
}

double StreamFitter::predict_sample(const RegressionSample& sample) const {
  if (!warmed_up_) throw Error(ErrorCode::not_initialized, "model is still warming up");
  return predict(coefficients(), design_row(sample, splines_, config_.basis_size));
}

}  // namespace slants
