#include "slants/ar_baseline.hpp"

#include "slants/error.hpp"

namespace slants {

ArBaseline::ArBaseline(std::size_t order) : order_(order) {
  if (order == 0) throw Error(ErrorCode::invalid_argument, "AR order must be positive");
  const auto n = static_cast<Eigen::Index>(order + 1);
  gram_ = Eigen::MatrixXd::Zero(n, n);
  moment_ = Eigen::VectorXd::Zero(n);
}

Eigen::VectorXd ArBaseline::regressor() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(order_ + 1));
  x[0] = 1.0;
  for (std::size_t l = 0; l < order_; ++l) x[static_cast<Eigen::Index>(l + 1)] = history_[l];
  return x;
}

double ArBaseline::predict() const {
  if (coef_.size() == 0 || history_.size() < order_) return mean_;
  return regressor().dot(coef_);
}

void ArBaseline::update(double y) {
  if (history_.size() == order_) {
    const Eigen::VectorXd x = regressor();
    gram_.noalias() += x * x.transpose();
    moment_ += y * x;
    ++fitted_;
    if (fitted_ > order_) {
      Eigen::MatrixXd g = gram_;
      g.diagonal().array() += 1e-10 * static_cast<double>(fitted_);
      coef_ = g.ldlt().solve(moment_);
    }
  }
  ++seen_;
  mean_ += (y - mean_) / static_cast<double>(seen_);
  history_.push_front(y);
  if (history_.size() > order_) history_.pop_back();
}

}  // namespace slants
