#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "slants/estimator.hpp"

namespace slants {

/// Weighted group LASSO in batch form:
///   sum_t w_t (y_t - z_t b)^2 + lambda_tilde * sum_i ||b_i||_2.
/// An empty weight vector means unit weights.
struct BatchProblem {
  Eigen::MatrixXd Z;
  Eigen::VectorXd y;
  Eigen::VectorXd weights;
  double lambda_tilde = 0.0;
  GroupLayout layout;
};

struct BatchOptions {
  double tol = 1e-9;  ///< Target KKT residual.
  std::size_t max_iters = 200000;
  /// Return the last iterate instead of throwing when max_iters is hit.
  bool allow_unconverged = false;
  /// Initial step size; 0 estimates 1/L by power iteration.
  double initial_step = 0.0;
};

struct BatchResult {
  Coefficients beta;
  double objective = 0.0;
  double kkt_residual = 0.0;  ///< Max over groups of the subgradient residual.
  std::size_t iterations = 0;
  double step = 0.0;
  bool converged = false;
};

[[nodiscard]] double batch_objective(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                     const Eigen::Ref<const Eigen::VectorXd>& y,
                                     const Eigen::VectorXd& weights, double lambda_tilde,
                                     const Coefficients& beta);

/// Max over groups of the distance from the origin to the subdifferential.
[[nodiscard]] double kkt_residual(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                  const Eigen::Ref<const Eigen::VectorXd>& y,
                                  const Eigen::VectorXd& weights, double lambda_tilde,
                                  const Coefficients& beta);

/**
 * Accelerated proximal gradient with backtracking and adaptive restart.
 * Independent of the EM route: it works on the raw design rather than on
 * the sufficient statistics.
 *
 * Throws ErrorCode::not_converged (with the final residual in the message)
 * if the KKT residual does not reach 10 * tol within max_iters.
 */
[[nodiscard]] BatchResult batch_group_lasso(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                            const Eigen::Ref<const Eigen::VectorXd>& y,
                                            const Eigen::VectorXd& weights, double lambda_tilde,
                                            const GroupLayout& layout, const BatchOptions& options = {},
                                            const std::optional<Coefficients>& warm_start = std::nullopt);

[[nodiscard]] inline BatchResult batch_group_lasso(const BatchProblem& problem,
                                                   const BatchOptions& options = {}) {
  return batch_group_lasso(problem.Z, problem.y, problem.weights, problem.lambda_tilde, problem.layout,
                           options);
}

}  // namespace slants
