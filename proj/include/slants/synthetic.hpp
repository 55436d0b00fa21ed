#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace slants {

/**
 * Portable random source for the synthetic experiments.
 *
 * Bits come from std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Uniforms take the top 53 bits; normals use Box-Muller, returning
 * the cosine branch first and caching the sine branch for the next call.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

/// Row-major D x T series.
struct TimeSeries {
  std::size_t dim = 0;
  std::vector<double> values;

  [[nodiscard]] std::size_t length() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  [[nodiscard]] std::span<const double> at(std::size_t t) const {
    return {values.data() + t * dim, dim};
  }
  [[nodiscard]] double operator()(std::size_t t, std::size_t d) const { return values[t * dim + d]; }
};

enum class Experiment {
  stationary = 1,    ///< Two-dimensional nonlinear model.
  change_point = 2,  ///< Same model with a regime switch after t = 500.
  network = 3,       ///< Nine-dimensional causal network.
  scaling = 4,       ///< The stationary model at arbitrary length.
};

struct SyntheticSpec {
  Experiment id = Experiment::stationary;
  std::size_t T = 500;
  std::uint64_t seed = 1;
  /// Drops the response noise (epsilon_2) of the two-dimensional models.
  bool noiseless_response = false;
  /// Replaces the driving series X_1 by a constant.
  std::optional<double> driver_constant;
  /// Standard deviation of the innovations of the nine-dimensional network.
  /// The printed system contains a quartic feedback loop through X2..X5 that
  /// escapes to infinity within a few thousand steps at unit variance.
  double network_noise = 0.8;
};

/// Last time index of the first regime in Experiment::change_point.
inline constexpr std::size_t change_point_time = 500;

/**
 * Simulates the experiment. Values whose defining equation refers to times
 * before the start of the series are set to zero. Draw order per time step
 * follows the dimension order; all draws happen even when a value is zeroed.
 */
[[nodiscard]] TimeSeries gen_experiment(const SyntheticSpec& spec);

/// Parent (source dimension, lag) pairs of each dimension, 0-based.
[[nodiscard]] std::vector<std::vector<std::pair<std::size_t, std::size_t>>> true_parents(Experiment id);

}  // namespace slants
