#pragma once

#include <cstddef>
#include <deque>
#include <span>

#include <Eigen/Dense>

namespace slants {

/// Intercept followed by `groups` blocks of `group_size` coefficients each.
struct GroupLayout {
  std::size_t groups = 0;
  std::size_t group_size = 0;

  [[nodiscard]] std::size_t dimension() const noexcept { return 1 + groups * group_size; }
  [[nodiscard]] std::size_t offset(std::size_t group) const noexcept {
    return 1 + group * group_size;
  }
  friend bool operator==(const GroupLayout&, const GroupLayout&) = default;
};

/// Intercept plus one coefficient block per covariate.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(GroupLayout layout);
  Coefficients(GroupLayout layout, Eigen::VectorXd values);

  [[nodiscard]] const GroupLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }
  [[nodiscard]] Eigen::VectorXd& values() noexcept { return values_; }

  [[nodiscard]] double intercept() const { return values_[0]; }
  void set_intercept(double mu) { values_[0] = mu; }

  [[nodiscard]] auto group(std::size_t i) const {
    return values_.segment(static_cast<Eigen::Index>(layout_.offset(i)),
                           static_cast<Eigen::Index>(layout_.group_size));
  }
  [[nodiscard]] auto group(std::size_t i) {
    return values_.segment(static_cast<Eigen::Index>(layout_.offset(i)),
                           static_cast<Eigen::Index>(layout_.group_size));
  }
  [[nodiscard]] double group_norm(std::size_t i) const { return group(i).norm(); }
  /// True when some coefficient of group i is nonzero.
  [[nodiscard]] bool group_active(std::size_t i) const { return group(i).cwiseAbs().maxCoeff() > 0.0; }

 private:
  GroupLayout layout_;
  Eigen::VectorXd values_;
};

/// Weighted Gram matrix A = Z'WZ and cross moment B = Z'WY.
struct SufficientStats {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  std::size_t t = 0;

  SufficientStats() = default;
  explicit SufficientStats(std::size_t dimension);
  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(B.size()); }
};

/// A <- (1-gamma) A + gamma z'z,  B <- (1-gamma) B + gamma y z'.
void update_stats(SufficientStats& stats, std::span<const double> row, double y, double gamma);

struct EmConfig {
  double tau = 1.0;
  double lambda = 0.0;
  std::size_t max_iters = 5;
  double rel_tol = 1e-7;
};

/// Watches iterate norms, possibly across several em_iterate calls, and
/// flags the exponential blow-up produced by an inadmissible tau: the norm
/// grew more than tenfold over the last three iterations while the step
/// lengths kept increasing.
class DivergenceMonitor {
 public:
  /// Records one iterate; returns true when divergence is detected.
  bool observe(double norm, double step);
  void reset() { history_.clear(); }

  static constexpr double growth_factor = 10.0;
  static constexpr std::size_t span = 3;

  struct Entry {
    double norm;
    double step;
  };
  [[nodiscard]] const std::deque<Entry>& history() const noexcept { return history_; }
  void restore(std::deque<Entry> history) { history_ = std::move(history); }

 private:
  std::deque<Entry> history_;
};

struct EmResult {
  Coefficients beta;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
};

/// r = (I - tau^2 A) beta + tau^2 B.
[[nodiscard]] Eigen::VectorXd e_step(const SufficientStats& stats, const Coefficients& beta,
                                     double tau);

/// Group-wise shrinkage [1 - threshold/||r_i||]_+ r_i; the intercept is copied.
[[nodiscard]] Coefficients group_soft_threshold(const Eigen::VectorXd& r, double threshold,
                                                const GroupLayout& layout);

/// Alternates e_step and group_soft_threshold (threshold lambda tau^2) for
/// at most config.max_iters iterations, stopping early once the relative
/// change drops below config.rel_tol. A diverged result carries the last
/// finite-norm iterate and should be discarded by the caller.
[[nodiscard]] EmResult em_iterate(const SufficientStats& stats, const Coefficients& beta0,
                                  const EmConfig& config, DivergenceMonitor* monitor = nullptr);

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration, to the given relative tolerance.
[[nodiscard]] double max_eigenvalue(const Eigen::MatrixXd& a, double rel_tol = 1e-6);

/// Spectral radius of I - tau^2 A.
[[nodiscard]] double contraction_radius(const SufficientStats& stats, double tau);

/// True iff tau > 0 and tau^2 * lambda_max(A) < 2.
[[nodiscard]] bool spectral_check(const SufficientStats& stats, double tau);

[[nodiscard]] double predict(const Coefficients& beta, std::span<const double> row);

/// 0.5 b'Ab - B'b + lambda * sum_i ||b_i||, the negative log posterior up to
/// a constant.
[[nodiscard]] double penalized_objective(const SufficientStats& stats, const Coefficients& beta,
                                         double lambda);

}  // namespace slants
