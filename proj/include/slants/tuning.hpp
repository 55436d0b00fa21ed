#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <vector>

namespace slants {

/// Step sizes gamma_t of the exponentially weighted statistics.
struct WeightSchedule {
  enum class Kind { harmonic, constant };
  Kind kind = Kind::harmonic;
  double c = 0.0;  ///< Used by Kind::constant; in (0, 1).

  static WeightSchedule harmonic() { return {Kind::harmonic, 0.0}; }
  static WeightSchedule constant(double c) { return {Kind::constant, c}; }
};

/// 1/t for the harmonic schedule, c for the constant one. t >= 1.
[[nodiscard]] double next_gamma(const WeightSchedule& schedule, std::size_t t);

/// Closed-form weights w_{T,1..T}: 1/T (harmonic) or c(1-c)^(T-t) (constant).
[[nodiscard]] std::vector<double> weights_closed_form(const WeightSchedule& schedule, std::size_t T);

/// The same weights produced by the recursion w_{t,j} = w_{t-1,j}(1-gamma_t),
/// w_{t,t} = gamma_t.
[[nodiscard]] std::vector<double> weights_by_recursion(const WeightSchedule& schedule, std::size_t T);

enum class WindowMode { tumbling, sliding };

struct ChannelConfig {
  double delta = 1.5;
  double nu = 1.05;
  std::size_t window = 20;
  WindowMode mode = WindowMode::tumbling;
};

/**
 * Three-channel search over the regularization level.
 *
 * Channel k in {0, 1, 2} runs at center * delta^(k - 1). Once every
 * channel has a full window of one-step errors, the windowed mean errors are
 * scaled by (nu^2, nu, 1) and the smallest wins; the center moves to the
 * winner. Ties go to the larger lambda. Under the harmonic schedule delta
 * shrinks as 1 + (delta_1 - 1)/t.
 */
class LambdaChannels {
 public:
  enum Channel : int { low = 0, mid = 1, high = 2 };

  struct Decision {
    bool decided = false;
    int winner = mid;
  };

  LambdaChannels() = default;
  LambdaChannels(double center, ChannelConfig config, bool shrink_delta);

  [[nodiscard]] std::array<double, 3> lambdas() const;
  [[nodiscard]] double center() const noexcept { return center_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] const ChannelConfig& config() const noexcept { return config_; }
  [[nodiscard]] bool shrinks_delta() const noexcept { return shrink_delta_; }

  /// Mean of the errors currently held in each channel's window (0 if empty).
  [[nodiscard]] std::array<double, 3> windowed_errors() const;

  /// Records one step's squared prediction errors and, when the windows are
  /// full, moves the center. `t` is the number of samples absorbed so far.
  Decision step(const std::array<double, 3>& errors, std::size_t t);

  // Raw state access for snapshots.
  [[nodiscard]] const std::array<std::deque<double>, 3>& windows() const noexcept { return windows_; }
  void restore(double center, double delta, std::array<std::deque<double>, 3> windows);

 private:
  double center_ = 1.0;
  double delta_ = 1.5;
  ChannelConfig config_;
  bool shrink_delta_ = false;
  std::array<std::deque<double>, 3> windows_;
};

/// Innovation parameter with lazy shrinkage on EM divergence.
class TauManager {
 public:
  TauManager() = default;
  TauManager(double tau, double shrink_factor);

  [[nodiscard]] double tau() const noexcept { return tau_; }
  [[nodiscard]] double shrink_factor() const noexcept { return shrink_; }
  [[nodiscard]] std::size_t shrink_count() const noexcept { return shrinks_; }

  /// tau <- tau * shrink_factor. Throws ErrorCode::numerical_failure once tau
  /// falls below 1e-12.
  void on_divergence();

  void restore(double tau, std::size_t shrinks);

  static constexpr double min_tau = 1e-12;

 private:
  double tau_ = 1.0;
  double shrink_ = 0.5;
  std::size_t shrinks_ = 0;
};

}  // namespace slants
