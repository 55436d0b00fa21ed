#include "slants/estimator.hpp"

#include <cmath>
#include <limits>

#include "slants/error.hpp"

namespace slants {

Coefficients::Coefficients(GroupLayout layout)
    : layout_(layout), values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.dimension()))) {}

Coefficients::Coefficients(GroupLayout layout, Eigen::VectorXd values)
    : layout_(layout), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != layout_.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "coefficient vector does not match its layout");
  }
}

SufficientStats::SufficientStats(std::size_t dimension)
    : A(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension))),
      B(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension))) {}

void update_stats(SufficientStats& stats, std::span<const double> row, double y, double gamma) {
  if (row.size() != stats.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "design row does not match the statistics dimension");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "weight gamma must lie in (0, 1]");
  }
  const Eigen::Map<const Eigen::VectorXd> z(row.data(), static_cast<Eigen::Index>(row.size()));
  const double keep = 1.0 - gamma;
  stats.A *= keep;
  stats.A.noalias() += gamma * (z * z.transpose());
  stats.B *= keep;
  stats.B.noalias() += (gamma * y) * z;
  ++stats.t;
}

bool DivergenceMonitor::observe(double norm, double step) {
  if (!std::isfinite(norm) || !std::isfinite(step)) return true;
  history_.push_back({norm, step});
  if (history_.size() > span + 1) history_.pop_front();
  if (history_.size() < span + 1) return false;
  const Entry& first = history_.front();
  if (!(first.norm > 0.0) || !(norm > growth_factor * first.norm)) return false;
  for (std::size_t k = 2; k < history_.size(); ++k) {
    if (!(history_[k].step > history_[k - 1].step)) return false;
  }
  return true;
}

Eigen::VectorXd e_step(const SufficientStats& stats, const Coefficients& beta, double tau) {
  if (static_cast<std::size_t>(beta.values().size()) != stats.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "coefficients do not match the statistics dimension");
  }
  const double tau2 = tau * tau;
  Eigen::VectorXd r = beta.values();
  r.noalias() -= tau2 * (stats.A * beta.values());
  r += tau2 * stats.B;
  return r;
}

Coefficients group_soft_threshold(const Eigen::VectorXd& r, double threshold,
                                  const GroupLayout& layout) {
  if (static_cast<std::size_t>(r.size()) != layout.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "vector does not match the group layout");
  }
  Coefficients out(layout, r);
  for (std::size_t i = 0; i < layout.groups; ++i) {
    auto g = out.group(i);
    const double norm = g.norm();
    const double factor = norm > 0.0 ? 1.0 - threshold / norm : 0.0;
    if (factor > 0.0) {
      g *= factor;
    } else {
      g.setZero();
    }
  }
  return out;
}

EmResult em_iterate(const SufficientStats& stats, const Coefficients& beta0, const EmConfig& config,
                    DivergenceMonitor* monitor) {
  DivergenceMonitor local;
  DivergenceMonitor& watch = monitor ? *monitor : local;
  const double threshold = config.lambda * config.tau * config.tau;

  EmResult result;
  result.beta = beta0;
  for (std::size_t k = 0; k < config.max_iters; ++k) {
    Coefficients next =
        group_soft_threshold(e_step(stats, result.beta, config.tau), threshold, beta0.layout());
    const double step = (next.values() - result.beta.values()).norm();
    const double norm = next.values().norm();
    ++result.iterations;
    if (watch.observe(norm, step)) {
      result.diverged = true;
      return result;
    }
    result.beta = std::move(next);
    if (step <= config.rel_tol * norm) {
      result.converged = true;
      break;
    }
  }
  return result;
}

namespace {

Eigen::VectorXd start_vector(Eigen::Index n) {
  // Fixed, non-degenerate start so results are reproducible.
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
  return x.normalized();
}

// Dominant eigenvalue of a symmetric PSD operator by power iteration on the
// Rayleigh quotient.
template <typename Apply>
double power_iteration(Eigen::Index n, Apply apply, double rel_tol) {
  if (n == 0) return 0.0;
  Eigen::VectorXd x = start_vector(n);
  double estimate = 0.0;
  constexpr int max_iter = 20000;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = apply(x);
    const double rayleigh = x.dot(y);
    const double norm = y.norm();
    if (!(norm > 0.0)) return 0.0;
    x = y / norm;
    // ||Ax|| bounds the Rayleigh quotient from above; their gap bounds the error.
    if (it > 0 && std::abs(norm - rayleigh) <= rel_tol * norm &&
        std::abs(rayleigh - estimate) <= rel_tol * norm) {
      return std::max(rayleigh, 0.0);
    }
    estimate = rayleigh;
  }
  return std::max(estimate, 0.0);
}

}  // namespace

double max_eigenvalue(const Eigen::MatrixXd& a, double rel_tol) {
  return power_iteration(a.rows(), [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; },
                         rel_tol);
}

double contraction_radius(const SufficientStats& stats, double tau) {
  const double top = max_eigenvalue(stats.A, 1e-9);
  // Smallest eigenvalue via the shifted operator (top I - A), which is PSD.
  const double shifted = power_iteration(
      stats.A.rows(),
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return top * x - stats.A * x; }, 1e-9);
  const double bottom = std::max(top - shifted, 0.0);
  const double tau2 = tau * tau;
  return std::max(std::abs(1.0 - tau2 * bottom), std::abs(1.0 - tau2 * top));
}

bool spectral_check(const SufficientStats& stats, double tau) {
  if (!(tau > 0.0)) return false;
  return tau * tau * max_eigenvalue(stats.A, 1e-6) < 2.0;
}

double predict(const Coefficients& beta, std::span<const double> row) {
  if (row.size() != static_cast<std::size_t>(beta.values().size())) {
    throw Error(ErrorCode::dimension_mismatch, "design row does not match the coefficients");
  }
  const Eigen::Map<const Eigen::VectorXd> z(row.data(), static_cast<Eigen::Index>(row.size()));
  return z.dot(beta.values());
}

double penalized_objective(const SufficientStats& stats, const Coefficients& beta, double lambda) {
  const Eigen::VectorXd& b = beta.values();
  double penalty = 0.0;
  for (std::size_t i = 0; i < beta.layout().groups; ++i) penalty += beta.group_norm(i);
  return 0.5 * b.dot(stats.A * b) - stats.B.dot(b) + lambda * penalty;
}

}  // namespace slants
