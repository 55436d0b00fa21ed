#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include <Eigen/Dense>

namespace slants {

/// Linear AR(p) with intercept, refitted by ordinary least squares on all
/// past values after each arrival. Used as the comparison baseline.
class ArBaseline {
 public:
  explicit ArBaseline(std::size_t order);

  /// One-step prediction for the next value, from data seen so far. Falls
  /// back to the running mean (or 0) until p + 1 regressions are available.
  [[nodiscard]] double predict() const;

  /// Absorbs y after its prediction has been taken.
  void update(double y);

  [[nodiscard]] std::size_t order() const noexcept { return order_; }

 private:
  [[nodiscard]] Eigen::VectorXd regressor() const;

  std::size_t order_;
  std::deque<double> history_;  ///< Most recent first.
  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  std::size_t fitted_ = 0;
  std::size_t seen_ = 0;
  double mean_ = 0.0;
  Eigen::VectorXd coef_;
};

}  // namespace slants
