#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slants/spline_basis.hpp"

namespace slants {

/// One regression pair: the target value at time t and its lagged covariates.
///
/// covariates[covariate_index(d, l)] holds X_{d, t-l} (0-based dimension d,
/// lag l >= 1).
struct RegressionSample {
  double y = 0.0;
  std::vector<double> covariates;
  std::size_t t = 0;
};

/// Position of (dimension d, lag l) in the covariate vector.
constexpr std::size_t covariate_index(std::size_t d, std::size_t lag, std::size_t max_lag) noexcept {
  return d * max_lag + (lag - 1);
}

/// Inverse of covariate_index: returns (dimension, lag).
constexpr std::pair<std::size_t, std::size_t> covariate_source(std::size_t index,
                                                                std::size_t max_lag) noexcept {
  return {index / max_lag, index % max_lag + 1};
}

/// Holds the last L observations of a D-dimensional series and turns each
/// new observation into a strictly causal regression sample.
class SeriesWindow {
 public:
  SeriesWindow(std::size_t dim, std::size_t max_lag);

  /// Buffers x. Returns a sample once L earlier observations are available;
  /// `target` is the 0-based dimension used as the response.
  std::optional<RegressionSample> push(std::span<const double> x, std::size_t target);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t max_lag() const noexcept { return max_lag_; }
  [[nodiscard]] std::size_t num_covariates() const noexcept { return dim_ * max_lag_; }
  /// Number of observations pushed so far (time index of the latest one).
  [[nodiscard]] std::size_t time() const noexcept { return t_; }
  /// Most recent observation first.
  [[nodiscard]] const std::deque<std::vector<double>>& buffer() const noexcept { return buffer_; }

  void restore(std::size_t t, std::deque<std::vector<double>> buffer);

 private:
  std::size_t dim_;
  std::size_t max_lag_;
  std::size_t t_ = 0;
  std::deque<std::vector<double>> buffer_;
};

/// Spline expansion for one covariate. An empty basis marks a degenerate
/// covariate whose block in the design row stays zero.
struct CovariateSpline {
  std::optional<SplineBasis> basis;
  CenteringState centering;

  [[nodiscard]] bool active() const noexcept { return basis.has_value(); }
};

/// Writes [1, centered block 1, ..., centered block D~] into row, which must
/// have length 1 + splines.size() * v.
void design_row(const RegressionSample& sample, std::span<const CovariateSpline> splines,
                std::size_t v, std::span<double> row);
[[nodiscard]] std::vector<double> design_row(const RegressionSample& sample,
                                             std::span<const CovariateSpline> splines,
                                             std::size_t v);

}  // namespace slants
