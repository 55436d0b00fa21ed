#include "slants/tuning.hpp"

#include <cmath>
#include <numeric>

#include "slants/error.hpp"

namespace slants {

double next_gamma(const WeightSchedule& schedule, std::size_t t) {
  if (t == 0) throw Error(ErrorCode::invalid_argument, "time index must be positive");
  if (schedule.kind == WeightSchedule::Kind::harmonic) return 1.0 / static_cast<double>(t);
  return schedule.c;
}

std::vector<double> weights_closed_form(const WeightSchedule& schedule, std::size_t T) {
  if (T == 0) throw Error(ErrorCode::invalid_argument, "T must be positive");
  std::vector<double> w(T);
  for (std::size_t t = 1; t <= T; ++t) {
    if (schedule.kind == WeightSchedule::Kind::harmonic) {
      w[t - 1] = 1.0 / static_cast<double>(T);
    } else {
      w[t - 1] = schedule.c * std::pow(1.0 - schedule.c, static_cast<double>(T - t));
    }
  }
  return w;
}

std::vector<double> weights_by_recursion(const WeightSchedule& schedule, std::size_t T) {
  if (T == 0) throw Error(ErrorCode::invalid_argument, "T must be positive");
  std::vector<double> w;
  w.reserve(T);
  for (std::size_t t = 1; t <= T; ++t) {
    const double gamma = next_gamma(schedule, t);
    for (double& wj : w) wj *= 1.0 - gamma;
    w.push_back(gamma);
  }
  return w;
}

LambdaChannels::LambdaChannels(double center, ChannelConfig config, bool shrink_delta)
    : center_(center), delta_(config.delta), config_(config), shrink_delta_(shrink_delta) {
  if (!(center > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda center must be positive");
  if (!(config.delta > 1.0)) throw Error(ErrorCode::invalid_argument, "delta must exceed 1");
  if (!(config.nu >= 1.0)) throw Error(ErrorCode::invalid_argument, "nu must be at least 1");
  if (config.window == 0) throw Error(ErrorCode::invalid_argument, "comparison window must be positive");
}

std::array<double, 3> LambdaChannels::lambdas() const {
  return {center_ / delta_, center_, center_ * delta_};
}

std::array<double, 3> LambdaChannels::windowed_errors() const {
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const auto& w = windows_[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(c)] =
        w.empty() ? 0.0 : std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  }
  return out;
}

LambdaChannels::Decision LambdaChannels::step(const std::array<double, 3>& errors, std::size_t t) {
  for (std::size_t c = 0; c < 3; ++c) {
    windows_[c].push_back(errors[c]);
    if (windows_[c].size() > config_.window) windows_[c].pop_front();
  }

  Decision decision;
  if (windows_[0].size() == config_.window) {
    const auto mean = windowed_errors();
    const double nu = config_.nu;
    const std::array<double, 3> score{nu * nu * mean[0], nu * mean[1], mean[2]};
    int winner = high;
    for (int c = mid; c >= low; --c) {
      if (score[static_cast<std::size_t>(c)] < score[static_cast<std::size_t>(winner)]) winner = c;
    }
    center_ = lambdas()[static_cast<std::size_t>(winner)];
    decision = {true, winner};
    if (config_.mode == WindowMode::tumbling) {
      for (auto& w : windows_) w.clear();
    }
  }
  if (shrink_delta_ && t > 0) delta_ = 1.0 + (config_.delta - 1.0) / static_cast<double>(t);
  return decision;
}

void LambdaChannels::restore(double center, double delta, std::array<std::deque<double>, 3> windows) {
  center_ = center;
  delta_ = delta;
  windows_ = std::move(windows);
}

TauManager::TauManager(double tau, double shrink_factor) : tau_(tau), shrink_(shrink_factor) {
  if (!(tau > 0.0)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "tau shrink factor must lie in (0, 1)");
  }
}

void TauManager::on_divergence() {
  tau_ *= shrink_;
  ++shrinks_;
  if (tau_ < min_tau) throw Error(ErrorCode::numerical_failure, "innovation parameter collapsed");
}

void TauManager::restore(double tau, std::size_t shrinks) {
  tau_ = tau;
  shrinks_ = shrinks;
}

}  // namespace slants
