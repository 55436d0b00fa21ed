#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slants/estimator.hpp"
#include "slants/lag_embed.hpp"

namespace slants {

/// Number of Step-2 basis functions, round(t1^zeta), at least degree + 1.
[[nodiscard]] std::size_t step2_basis_size(std::size_t t1, double zeta, int degree);

/// Stopping threshold v log(t1) / t1 of the backward search.
[[nodiscard]] double bic_penalty(std::size_t basis_size, std::size_t t1);

/**
 * Mean squared residual of the unpenalized additive spline model on
 * `subset`, fitted by least squares. Each covariate gets `basis_size`
 * equally spaced knots over its observed range in `samples`, centered by
 * its sample mean; the intercept is always included. An empty subset gives
 * the variance of y.
 *
 * Throws ErrorCode::underdetermined when there are fewer samples than
 * parameters.
 */
[[nodiscard]] double fit_subset_mse(std::span<const RegressionSample> samples,
                                    std::span<const std::size_t> subset, std::size_t basis_size,
                                    int degree = 2);

struct BackwardResult {
  std::vector<std::size_t> selected;
  /// MSE of each accepted set, starting with the candidate set itself.
  std::vector<double> mse_path;
  std::vector<std::size_t> removed;  ///< Covariates removed, in order.
  std::size_t basis_size = 0;
  double penalty = 0.0;
};

struct BackwardOptions {
  double zeta = 0.4;
  int degree = 2;
  /// Overrides the BIC stopping threshold when set.
  std::optional<double> penalty;
};

/**
 * Backward stepwise refinement of a candidate set on held-forward samples.
 *
 * Each round drops the covariate whose removal gives the smallest MSE (ties
 * to the smaller index). The removal is kept while the MSE increase stays
 * below the penalty; the search stops at the first removal that costs more
 * and returns the set before it.
 */
[[nodiscard]] BackwardResult backward_select(std::span<const RegressionSample> samples,
                                             std::vector<std::size_t> candidates, std::size_t t1,
                                             const BackwardOptions& options = {});

struct CausalEdge {
  std::size_t source = 0;  ///< 0-based dimension.
  std::size_t target = 0;  ///< 0-based dimension.
  std::vector<std::size_t> lags;

  /// Lags concatenated in increasing order ("1", "12"); comma separated
  /// when some lag has more than one digit.
  [[nodiscard]] std::string label() const;
  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

struct CausalityGraph {
  std::vector<CausalEdge> edges;  ///< Sorted by (source, target).

  /// DOT text with 1-based node names.
  [[nodiscard]] std::string to_dot() const;
  friend bool operator==(const CausalityGraph&, const CausalityGraph&) = default;
};

/// per_target[j] holds the coefficients of the model for dimension j; all
/// share lag order `max_lag`. Edge d -> j carries lag l when the (d, l) group
/// norm exceeds `group_norm_floor`.
[[nodiscard]] CausalityGraph extract_graph(std::span<const Coefficients> per_target,
                                           std::size_t max_lag, double group_norm_floor = 1e-8);

}  // namespace slants
