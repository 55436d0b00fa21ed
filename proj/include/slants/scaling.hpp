#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slants/stream.hpp"
#include "slants/synthetic.hpp"

namespace slants {

struct ScalingRow {
  std::size_t T = 0;
  double mean_seconds = 0.0;
  double stderr_seconds = 0.0;
  std::string method;  ///< "slants" or "batch_rerun".
};

struct ScalingOptions {
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  bool include_batch = true;
  /// Penalty level of the batch baseline, in the streaming lambda scale.
  double batch_lambda = 0.02;
  std::size_t batch_iters = 20;
};

/// Model settings of the stationary experiment: L = 8, ten quadratic splines,
/// harmonic weights.
[[nodiscard]] StreamConfig stationary_experiment_config();

/// Seconds for one streaming pass over `series`.
double time_streaming_pass(const TimeSeries& series, const StreamConfig& config);

/// Seconds for the baseline that re-solves the batch problem on all data
/// seen so far after every arrival (warm-started, capped iterations).
double time_batch_rerun(const TimeSeries& series, const StreamConfig& config, double lambda,
                        std::size_t iters);

/// Wall-clock scaling on the stationary experiment for each T: mean and
/// standard error over `repeats` runs. T values must be increasing.
[[nodiscard]] std::vector<ScalingRow> scaling_harness(std::span<const std::size_t> T_values,
                                                      const ScalingOptions& options = {});

/// CSV with header T,mean_seconds,stderr_seconds,method.
[[nodiscard]] std::string scaling_csv(std::span<const ScalingRow> rows);

}  // namespace slants
