#include "slants/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "slants/error.hpp"
#include "slants/spline_basis.hpp"

namespace slants {

std::size_t step2_basis_size(std::size_t t1, double zeta, int degree) {
  const double v = std::round(std::pow(static_cast<double>(t1), zeta));
  return std::max(static_cast<std::size_t>(v), static_cast<std::size_t>(degree) + 1);
}

double bic_penalty(std::size_t basis_size, std::size_t t1) {
  return static_cast<double>(basis_size) * std::log(static_cast<double>(t1)) / static_cast<double>(t1);
}

double fit_subset_mse(std::span<const RegressionSample> samples, std::span<const std::size_t> subset,
                      std::size_t basis_size, int degree) {
  if (samples.empty()) throw Error(ErrorCode::insufficient_data, "no samples for the subset fit");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index t = 0; t < n; ++t) y[t] = samples[static_cast<std::size_t>(t)].y;

  // Bases over each covariate's observed range; constant covariates add nothing.
  std::vector<std::pair<std::size_t, SplineBasis>> bases;
  for (std::size_t d : subset) {
    if (d >= samples.front().covariates.size()) {
      throw Error(ErrorCode::invalid_argument, "subset index out of range");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
      lo = std::min(lo, s.covariates[d]);
      hi = std::max(hi, s.covariates[d]);
    }
    if (hi > lo) bases.emplace_back(d, SplineBasis::uniform(lo, hi, basis_size, degree));
  }

  const auto p = static_cast<Eigen::Index>(1 + bases.size() * basis_size);
  if (n < p) throw Error(ErrorCode::underdetermined, "Step 2 underdetermined");

  Eigen::MatrixXd z(n, p);
  z.col(0).setOnes();
  std::vector<double> values(basis_size);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const auto col0 = static_cast<Eigen::Index>(1 + b * basis_size);
    for (Eigen::Index t = 0; t < n; ++t) {
      bases[b].second.eval(samples[static_cast<std::size_t>(t)].covariates[bases[b].first], values);
      for (std::size_t j = 0; j < basis_size; ++j) z(t, col0 + static_cast<Eigen::Index>(j)) = values[j];
    }
    auto block = z.middleCols(col0, static_cast<Eigen::Index>(basis_size));
    block.rowwise() -= block.colwise().mean();
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd gram = (z.transpose() * z) * inv_n;
  gram.diagonal().array() += 1e-10;
  const Eigen::VectorXd rhs = (z.transpose() * y) * inv_n;
  const Eigen::VectorXd coef = gram.ldlt().solve(rhs);
  return (y - z * coef).squaredNorm() * inv_n;
}

BackwardResult backward_select(std::span<const RegressionSample> samples,
                               std::vector<std::size_t> candidates, std::size_t t1,
                               const BackwardOptions& options) {
  if (t1 < 2) throw Error(ErrorCode::invalid_argument, "split point must be at least 2");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  BackwardResult result;
  result.basis_size = step2_basis_size(t1, options.zeta, options.degree);
  result.penalty = options.penalty.value_or(bic_penalty(result.basis_size, t1));

  std::vector<std::size_t> current = candidates;
  double current_mse = fit_subset_mse(samples, current, result.basis_size, options.degree);
  result.mse_path.push_back(current_mse);

  while (!current.empty()) {
    double best_mse = std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    std::vector<std::size_t> trial;
    for (std::size_t pos = 0; pos < current.size(); ++pos) {
      trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
      const double mse = fit_subset_mse(samples, trial, result.basis_size, options.degree);
      if (mse < best_mse) {  // strict: ties keep the smaller index
        best_mse = mse;
        best_pos = pos;
      }
    }
    if (!(best_mse - current_mse < result.penalty)) break;
    result.removed.push_back(current[best_pos]);
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
    current_mse = best_mse;
    result.mse_path.push_back(current_mse);
  }
  result.selected = std::move(current);
  return result;
}

std::string CausalEdge::label() const {
  const bool wide = std::any_of(lags.begin(), lags.end(), [](std::size_t l) { return l >= 10; });
  std::string out;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (wide && i > 0) out += ',';
    out += std::to_string(lags[i]);
  }
  return out;
}

std::string CausalityGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph causality {\n";
  for (const auto& e : edges) {
    out << "  " << e.source + 1 << " -> " << e.target + 1 << " [label=\"" << e.label() << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

CausalityGraph extract_graph(std::span<const Coefficients> per_target, std::size_t max_lag,
                             double group_norm_floor) {
  if (max_lag == 0) throw Error(ErrorCode::invalid_argument, "lag order must be positive");
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> lags;
  for (std::size_t target = 0; target < per_target.size(); ++target) {
    const auto& beta = per_target[target];
    if (beta.layout().groups % max_lag != 0) {
      throw Error(ErrorCode::dimension_mismatch, "coefficient groups are not a multiple of the lag order");
    }
    for (std::size_t g = 0; g < beta.layout().groups; ++g) {
      if (!(beta.group_norm(g) > group_norm_floor)) continue;
      const auto [source, lag] = covariate_source(g, max_lag);
      lags[{source, target}].push_back(lag);
    }
  }
  CausalityGraph graph;
  for (auto& [key, l] : lags) {
    std::sort(l.begin(), l.end());
    graph.edges.push_back({key.first, key.second, std::move(l)});
  }
  return graph;
}

}  // namespace slants
