#include "slants/lag_embed.hpp"

#include <algorithm>

#include "slants/error.hpp"

namespace slants {

SeriesWindow::SeriesWindow(std::size_t dim, std::size_t max_lag) : dim_(dim), max_lag_(max_lag) {
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "series dimension must be positive");
  if (max_lag == 0) throw Error(ErrorCode::invalid_argument, "lag order must be positive");
}

std::optional<RegressionSample> SeriesWindow::push(std::span<const double> x, std::size_t target) {
  if (x.size() != dim_) throw Error(ErrorCode::dimension_mismatch, "observation length mismatch");
  if (target >= dim_) throw Error(ErrorCode::invalid_argument, "target index out of range");
  ++t_;
  std::optional<RegressionSample> sample;
  if (buffer_.size() == max_lag_) {
    RegressionSample s;
    s.y = x[target];
    s.t = t_;
    s.covariates.resize(num_covariates());
    for (std::size_t d = 0; d < dim_; ++d) {
      for (std::size_t lag = 1; lag <= max_lag_; ++lag) {
        s.covariates[covariate_index(d, lag, max_lag_)] = buffer_[lag - 1][d];
      }
    }
    sample = std::move(s);
  }
  buffer_.emplace_front(x.begin(), x.end());
  if (buffer_.size() > max_lag_) buffer_.pop_back();
  return sample;
}

void SeriesWindow::restore(std::size_t t, std::deque<std::vector<double>> buffer) {
  if (buffer.size() > max_lag_ || buffer.size() > t) {
    throw Error(ErrorCode::format_error, "series window buffer inconsistent with its lag order");
  }
  for (const auto& obs : buffer) {
    if (obs.size() != dim_) throw Error(ErrorCode::format_error, "buffered observation has wrong length");
  }
  t_ = t;
  buffer_ = std::move(buffer);
}

void design_row(const RegressionSample& sample, std::span<const CovariateSpline> splines,
                std::size_t v, std::span<double> row) {
  if (sample.covariates.size() != splines.size()) {
    throw Error(ErrorCode::dimension_mismatch, "sample covariates do not match the spline list");
  }
  if (row.size() != 1 + splines.size() * v) {
    throw Error(ErrorCode::dimension_mismatch, "design row length mismatch");
  }
  row[0] = 1.0;
  for (std::size_t i = 0; i < splines.size(); ++i) {
    auto block = row.subspan(1 + i * v, v);
    const auto& cs = splines[i];
    if (!cs.active()) {
      std::fill(block.begin(), block.end(), 0.0);
      continue;
    }
    if (cs.basis->size() != v) throw Error(ErrorCode::dimension_mismatch, "basis size mismatch");
    centered_eval(*cs.basis, cs.centering, sample.covariates[i], block);
  }
}

std::vector<double> design_row(const RegressionSample& sample,
                               std::span<const CovariateSpline> splines, std::size_t v) {
  std::vector<double> row(1 + splines.size() * v);
  design_row(sample, splines, v, row);
  return row;
}

}  // namespace slants
