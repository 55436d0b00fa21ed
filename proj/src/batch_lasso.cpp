#include "slants/batch_lasso.hpp"

#include <cmath>
#include <sstream>

#include "slants/error.hpp"

namespace slants {

namespace {

// Gradient of the weighted squared loss: 2 Z' W (Z b - y).
Eigen::VectorXd loss_gradient(const Eigen::Ref<const Eigen::MatrixXd>& z,
                              const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& b) {
  Eigen::VectorXd residual = z * b - y;
  if (w.size() > 0) residual.array() *= w.array();
  return 2.0 * (z.transpose() * residual);
}

double loss(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::VectorXd>& y,
            const Eigen::VectorXd& w, const Eigen::VectorXd& b) {
  const Eigen::VectorXd r = z * b - y;
  if (w.size() > 0) return (r.array().square() * w.array()).sum();
  return r.squaredNorm();
}

double penalty(const Coefficients& beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < beta.layout().groups; ++i) s += beta.group_norm(i);
  return s;
}

void check_shapes(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::VectorXd>& y,
                  const Eigen::VectorXd& w, const GroupLayout& layout) {
  if (z.rows() != y.size() || static_cast<std::size_t>(z.cols()) != layout.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "batch problem dimensions are inconsistent");
  }
  if (w.size() != 0 && w.size() != y.size()) {
    throw Error(ErrorCode::dimension_mismatch, "weight vector length mismatch");
  }
  if (w.size() != 0 && (w.array() < 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "weights must be nonnegative");
  }
}

}  // namespace

double batch_objective(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::VectorXd& weights, double lambda_tilde, const Coefficients& beta) {
  return loss(z, y, weights, beta.values()) + lambda_tilde * penalty(beta);
}

double kkt_residual(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const Eigen::VectorXd& weights, double lambda_tilde, const Coefficients& beta) {
  const Eigen::VectorXd g = loss_gradient(z, y, weights, beta.values());
  double worst = std::abs(g[0]);
  const GroupLayout& layout = beta.layout();
  for (std::size_t i = 0; i < layout.groups; ++i) {
    const auto gi = g.segment(static_cast<Eigen::Index>(layout.offset(i)),
                              static_cast<Eigen::Index>(layout.group_size));
    const auto bi = beta.group(i);
    const double norm = bi.norm();
    double r;
    if (norm > 0.0) {
      r = (gi + lambda_tilde * bi / norm).norm();
    } else {
      r = std::max(0.0, gi.norm() - lambda_tilde);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

BatchResult batch_group_lasso(const Eigen::Ref<const Eigen::MatrixXd>& z,
                              const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::VectorXd& weights,
                              double lambda_tilde, const GroupLayout& layout, const BatchOptions& options,
                              const std::optional<Coefficients>& warm_start) {
  check_shapes(z, y, weights, layout);
  if (!(options.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  if (lambda_tilde < 0.0) throw Error(ErrorCode::invalid_argument, "lambda must be nonnegative");

  double step = options.initial_step;
  if (!(step > 0.0)) {
    // 1/L with L = 2 lambda_max(Z'WZ).
    Eigen::MatrixXd gram = weights.size() > 0 ? Eigen::MatrixXd(z.transpose() * weights.asDiagonal() * z)
                                              : Eigen::MatrixXd(z.transpose() * z);
    const double top = max_eigenvalue(gram, 1e-3);
    step = top > 0.0 ? 1.0 / (2.0 * top) : 1.0;
  }

  Coefficients x = warm_start.value_or(Coefficients(layout));
  if (!(x.layout() == layout)) throw Error(ErrorCode::dimension_mismatch, "warm start layout mismatch");
  Eigen::VectorXd x_prev = x.values();
  Eigen::VectorXd yk = x.values();
  double momentum = 1.0;
  double f_prev = batch_objective(z, y, weights, lambda_tilde, x);

  BatchResult result;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    const Eigen::VectorXd grad = loss_gradient(z, y, weights, yk);
    const double f_y = loss(z, y, weights, yk);

    // Backtracking on the quadratic upper bound of the smooth part.
    Coefficients candidate;
    for (;;) {
      candidate = group_soft_threshold(yk - step * grad, lambda_tilde * step, layout);
      const Eigen::VectorXd diff = candidate.values() - yk;
      const double bound = f_y + grad.dot(diff) + diff.squaredNorm() / (2.0 * step);
      if (loss(z, y, weights, candidate.values()) <= bound * (1.0 + 1e-14) + 1e-300) break;
      step *= 0.5;
      if (step < 1e-300) throw Error(ErrorCode::numerical_failure, "backtracking step underflow");
    }

    const double f_new = batch_objective(z, y, weights, lambda_tilde, candidate);
    ++result.iterations;
    if (f_new > f_prev && momentum > 1.0) {
      // Adaptive restart: drop momentum and retry from the last iterate.
      momentum = 1.0;
      yk = x.values();
      continue;
    }
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    x_prev = x.values();
    x = std::move(candidate);
    yk = x.values() + ((momentum - 1.0) / next_momentum) * (x.values() - x_prev);
    momentum = next_momentum;
    f_prev = f_new;

    if (result.iterations % 10 == 0 || it + 1 == options.max_iters) {
      const double kkt = kkt_residual(z, y, weights, lambda_tilde, x);
      if (kkt <= options.tol) {
        result.converged = true;
        result.kkt_residual = kkt;
        break;
      }
    }
  }

  result.kkt_residual = kkt_residual(z, y, weights, lambda_tilde, x);
  result.converged = result.converged || result.kkt_residual <= options.tol;
  if (!result.converged && result.kkt_residual > 10.0 * options.tol && !options.allow_unconverged) {
    std::ostringstream msg;
    msg << "batch group lasso did not converge; final KKT residual " << result.kkt_residual;
    throw Error(ErrorCode::not_converged, msg.str());
  }
  result.objective = batch_objective(z, y, weights, lambda_tilde, x);
  result.step = step;
  result.beta = std::move(x);
  return result;
}

}  // namespace slants
