#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "slants/estimator.hpp"
#include "slants/lag_embed.hpp"
#include "slants/tuning.hpp"

namespace slants {

struct StreamConfig {
  std::size_t dim = 1;
  std::size_t target = 0;  ///< 0-based response dimension.
  std::size_t max_lag = 1;
  std::size_t basis_size = 10;
  int degree = 2;
  double q_lo = 0.01;
  double q_hi = 0.99;
  /// Regression samples collected before the knots are frozen; 0 selects
  /// max(50, 5 * basis_size).
  std::size_t warmup = 0;
  WeightSchedule schedule = WeightSchedule::harmonic();
  ChannelConfig channels;
  std::size_t em_iters = 5;
  double rel_tol = 1e-7;
  /// EM iterations run once on the warm-up statistics.
  std::size_t warmup_em_iters = 200;
  /// Initial lambda; 0 selects lambda0_scale * max_i ||B_i|| after warm-up.
  double lambda0 = 0.0;
  double lambda0_scale = 0.2;
  /// Initial tau; 0 selects tau_scale / sqrt(lambda_max(A)) after warm-up.
  double tau0 = 0.0;
  double tau_scale = 0.5;
  double tau_shrink = 0.5;

  [[nodiscard]] std::size_t effective_warmup() const noexcept;
  /// Throws ErrorCode::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Result of pushing one observation.
struct StepOutput {
  bool predicted = false;  ///< False while warming up.
  std::size_t t = 0;       ///< 1-based time index of the observation.
  double y = 0.0;
  double yhat = 0.0;
  double err = 0.0;  ///< Squared one-step prediction error of the center channel.
  double lambda = 0.0;
  double tau = 0.0;
  std::array<double, 3> channel_errors{};  ///< Windowed mean errors (low, mid, high).
};

/// Sampled additive component f_d on a grid.
struct ComponentCurve {
  std::size_t covariate = 0;
  std::vector<double> x;
  std::vector<double> f;
};

/**
 * Streaming sparse additive model for one target coordinate.
 *
 * Each call to push() forms the lagged regression sample, predicts it with
 * the current coefficients, records the error, and only then absorbs the
 * sample into the sufficient statistics and runs the EM updates of the
 * three lambda channels.
 */
class StreamFitter {
 public:
  explicit StreamFitter(StreamConfig config);

  StepOutput push(std::span<const double> observation);

  [[nodiscard]] const StreamConfig& config() const noexcept { return config_; }
  [[nodiscard]] bool warmed_up() const noexcept { return warmed_up_; }
  [[nodiscard]] std::size_t num_covariates() const noexcept { return window_.num_covariates(); }
  [[nodiscard]] GroupLayout layout() const noexcept {
    return {window_.num_covariates(), config_.basis_size};
  }
  [[nodiscard]] std::size_t time() const noexcept { return window_.time(); }

  /// Coefficients of the center channel.
  [[nodiscard]] const Coefficients& coefficients() const noexcept { return beta_[LambdaChannels::mid]; }
  [[nodiscard]] const Coefficients& channel_coefficients(int channel) const {
    return beta_.at(static_cast<std::size_t>(channel));
  }
  [[nodiscard]] const SufficientStats& stats() const noexcept { return stats_; }
  [[nodiscard]] const std::vector<CovariateSpline>& splines() const noexcept { return splines_; }
  [[nodiscard]] const LambdaChannels& channels() const noexcept { return channels_; }
  [[nodiscard]] double lambda() const noexcept { return channels_.center(); }
  [[nodiscard]] double tau() const noexcept { return tau_.tau(); }

  /// Covariates whose coefficient group is nonzero.
  [[nodiscard]] std::vector<std::size_t> active_set() const;

  /// f_d on `points` equally spaced values; the range defaults to the knot domain.
  [[nodiscard]] ComponentCurve component(std::size_t covariate, std::size_t points,
                                         std::optional<double> lo = std::nullopt,
                                         std::optional<double> hi = std::nullopt) const;

  /// Prediction of the center channel for a sample, without updating state.
  [[nodiscard]] double predict_sample(const RegressionSample& sample) const;

  void save(std::ostream& out) const;
  static StreamFitter load(std::istream& in);

 private:
  void finish_warmup();
  void absorb(const RegressionSample& sample, std::array<double, 3>* errors,
              double* yhat);
  void run_channels(std::size_t em_iters);

  StreamConfig config_;
  SeriesWindow window_;
  std::vector<RegressionSample> warmup_samples_;
  bool warmed_up_ = false;
  std::vector<CovariateSpline> splines_;
  SufficientStats stats_;
  std::array<Coefficients, 3> beta_;
  std::array<DivergenceMonitor, 3> monitors_;
  LambdaChannels channels_;
  TauManager tau_;
  std::vector<double> row_;
};

}  // namespace slants

namespace slants {

/// Writes several fitters into one versioned snapshot.
void save_snapshot(std::ostream& out, std::span<const StreamFitter* const> fitters);
[[nodiscard]] std::vector<StreamFitter> load_snapshot(std::istream& in);

}  // namespace slants
