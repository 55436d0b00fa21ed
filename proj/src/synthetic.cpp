#include "slants/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slants/error.hpp"

namespace slants {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (cached_) {
    const double z = *cached_;
    cached_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

namespace {

TimeSeries two_dim(const SyntheticSpec& spec, bool switching) {
  TimeSeries s{2, std::vector<double>(2 * spec.T, 0.0)};
  Rng rng(spec.seed);
  auto x1 = [&](std::size_t t) { return s.values[(t - 1) * 2]; };
  for (std::size_t t = 1; t <= spec.T; ++t) {
    const bool second_regime = switching && t > change_point_time;
    double drive = second_regime ? rng.uniform(-1.0, 1.0) : rng.normal();
    const double eps2 = rng.normal();
    if (spec.driver_constant) drive = *spec.driver_constant;
    s.values[(t - 1) * 2] = drive;
    const double noise = spec.noiseless_response ? 0.0 : 0.2 * eps2;
    double x2 = 0.0;
    if (t > 7) {
      const double lag1 = x1(t - 1);
      const double lag7 = x1(t - 7);
      x2 = second_regime ? -2.0 * lag1 * lag1 + std::exp(lag7) + noise
                         : 0.5 * lag1 * lag1 - 0.8 * lag7 + noise;
    }
    s.values[(t - 1) * 2 + 1] = x2;
  }
  return s;
}

TimeSeries network(const SyntheticSpec& spec) {
  constexpr std::size_t D = 9;
  TimeSeries s{D, std::vector<double>(D * spec.T, 0.0)};
  Rng rng(spec.seed);
  auto x = [&](std::size_t t, std::size_t d) { return s.values[(t - 1) * D + (d - 1)]; };
  for (std::size_t t = 1; t <= spec.T; ++t) {
    double e[D + 1];
    for (std::size_t d = 1; d <= D; ++d) e[d] = spec.network_noise * rng.normal();
    double* row = s.values.data() + (t - 1) * D;
    row[0] = spec.driver_constant.value_or(e[1]);
    if (t <= 2) continue;  // every equation reaches back two steps
    row[1] = 0.6 * x(t - 1, 3) + e[2];
    row[2] = 0.3 * x(t - 2, 4) * x(t - 2, 4) + e[3];
    row[3] = 0.7 * x(t - 1, 5) - 0.2 * x(t - 2, 5) + e[4];
    row[4] = -0.2 * x(t - 1, 2) * x(t - 1, 2) + e[5];
    row[5] = 0.5 * x(t - 2, 6) + 1.0 + e[6];
    row[6] = 2.0 * std::exp(-x(t - 2, 7) * x(t - 2, 7)) + e[7];
    row[7] = 6.0 * x(t - 1, 7) - 5.0 * x(t - 2, 9) + e[8];
    row[8] = -x(t - 1, 6) + 0.9 * x(t - 2, 7) + e[9];
    for (std::size_t d = 0; d < D; ++d) {
      if (!std::isfinite(row[d])) {
        throw Error(ErrorCode::numerical_failure,
                    "network series diverged at t=" + std::to_string(t) + "; lower the noise scale");
      }
    }
  }
  return s;
}

}  // namespace

TimeSeries gen_experiment(const SyntheticSpec& spec) {
  if (spec.T == 0) throw Error(ErrorCode::invalid_argument, "series length must be positive");
  switch (spec.id) {
    case Experiment::stationary:
    case Experiment::scaling:
      return two_dim(spec, false);
    case Experiment::change_point:
      return two_dim(spec, true);
    case Experiment::network:
      return network(spec);
  }
  throw Error(ErrorCode::invalid_argument, "unknown experiment");
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> true_parents(Experiment id) {
  switch (id) {
    case Experiment::stationary:
    case Experiment::scaling:
    case Experiment::change_point:
      return {{}, {{0, 1}, {0, 7}}};
    case Experiment::network:
      return {{},
              {{2, 1}},
              {{3, 2}},
              {{4, 1}, {4, 2}},
              {{1, 1}},
              {{5, 2}},
              {{6, 2}},
              {{6, 1}, {8, 2}},
              {{5, 1}, {6, 2}}};
  }
  throw Error(ErrorCode::invalid_argument, "unknown experiment");
}

}  // namespace slants
