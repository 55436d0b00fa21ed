#include "slants/scaling.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "slants/batch_lasso.hpp"
#include "slants/error.hpp"
#include "slants/format.hpp"

namespace slants {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

StreamConfig stationary_experiment_config() {
  StreamConfig c;
  c.dim = 2;
  c.target = 1;
  c.max_lag = 8;
  c.basis_size = 10;
  c.degree = 2;
  c.schedule = WeightSchedule::harmonic();
  return c;
}

double time_streaming_pass(const TimeSeries& series, const StreamConfig& config) {
  const auto start = Clock::now();
  StreamFitter fitter(config);
  for (std::size_t t = 0; t < series.length(); ++t) fitter.push(series.at(t));
  return seconds_since(start);
}

double time_batch_rerun(const TimeSeries& series, const StreamConfig& config, double lambda,
                        std::size_t iters) {
  const auto start = Clock::now();
  SeriesWindow window(config.dim, config.max_lag);
  const std::size_t warmup = config.effective_warmup();
  const GroupLayout layout{window.num_covariates(), config.basis_size};

  std::vector<RegressionSample> pending;
  std::vector<CovariateSpline> splines(layout.groups);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(series.length()), static_cast<Eigen::Index>(layout.dimension()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(series.length()));
  Eigen::Index rows = 0;
  std::vector<double> raw(config.basis_size);
  std::vector<double> row(layout.dimension());
  std::optional<Coefficients> beta;
  BatchOptions options;
  options.tol = 1e-6;
  options.max_iters = iters;
  options.allow_unconverged = true;

  auto append = [&](const RegressionSample& s) {
    for (std::size_t i = 0; i < splines.size(); ++i) {
      if (!splines[i].active()) continue;
      splines[i].basis->eval(s.covariates[i], raw);
      update_centering(splines[i].centering, raw);
    }
    design_row(s, splines, config.basis_size, row);
    for (std::size_t j = 0; j < row.size(); ++j) z(rows, static_cast<Eigen::Index>(j)) = row[j];
    y[rows] = s.y;
    ++rows;
  };

  bool ready = false;
  for (std::size_t t = 0; t < series.length(); ++t) {
    auto sample = window.push(series.at(t), config.target);
    if (!sample) continue;
    if (!ready) {
      pending.push_back(std::move(*sample));
      if (pending.size() < warmup) continue;
      std::vector<double> column(pending.size());
      for (std::size_t i = 0; i < splines.size(); ++i) {
        for (std::size_t s = 0; s < pending.size(); ++s) column[s] = pending[s].covariates[i];
        try {
          splines[i].basis = make_knots(column, config.basis_size, config.degree, config.q_lo, config.q_hi);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::degenerate_covariate) throw;
        }
      }
      for (const auto& s : pending) append(s);
      pending.clear();
      ready = true;
    } else {
      append(*sample);
    }
    const double lambda_tilde = 2.0 * static_cast<double>(rows) * lambda;
    auto result = batch_group_lasso(z.topRows(rows), y.head(rows), Eigen::VectorXd(), lambda_tilde, layout,
                                    options, beta);
    options.initial_step = result.step * 2.0;
    beta = std::move(result.beta);
  }
  return seconds_since(start);
}

std::vector<ScalingRow> scaling_harness(std::span<const std::size_t> T_values, const ScalingOptions& options) {
  if (T_values.empty()) throw Error(ErrorCode::invalid_argument, "no series lengths given");
  if (options.repeats == 0) throw Error(ErrorCode::invalid_argument, "repeat count must be positive");
  for (std::size_t i = 1; i < T_values.size(); ++i) {
    if (T_values[i] <= T_values[i - 1]) throw Error(ErrorCode::invalid_argument, "series lengths must increase");
  }
  const StreamConfig config = stationary_experiment_config();

  auto summarize = [&](std::size_t T, const std::vector<double>& times, const char* method) {
    const double n = static_cast<double>(times.size());
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : times) ss += (x - mean) * (x - mean);
    const double sd = times.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return ScalingRow{T, mean, sd / std::sqrt(n), method};
  };

  std::vector<ScalingRow> rows;
  for (const std::size_t T : T_values) {
    SyntheticSpec spec;
    spec.id = Experiment::scaling;
    spec.T = T;
    spec.seed = options.seed;
    const TimeSeries series = gen_experiment(spec);
    std::vector<double> times;
    for (std::size_t r = 0; r < options.repeats; ++r) times.push_back(time_streaming_pass(series, config));
    rows.push_back(summarize(T, times, "slants"));
    if (options.include_batch) {
      times.clear();
      for (std::size_t r = 0; r < options.repeats; ++r) {
        times.push_back(time_batch_rerun(series, config, options.batch_lambda, options.batch_iters));
      }
      rows.push_back(summarize(T, times, "batch_rerun"));
    }
  }
  return rows;
}

std::string scaling_csv(std::span<const ScalingRow> rows) {
  std::string out = "T,mean_seconds,stderr_seconds,method\n";
  for (const auto& r : rows) {
    out += std::to_string(r.T) + ',' + format_number(r.mean_seconds) + ',' + format_number(r.stderr_seconds) +
           ',' + r.method + '\n';
  }
  return out;
}

}  // namespace slants
