#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slants {

/**
 * Clamped B-spline basis for a single covariate.
 *
 * The knot vector repeats each boundary knot degree+1 times, so the number
 * of basis functions is (number of intervals) + degree. Inputs outside
 * [lo, hi] are clamped before evaluation, which keeps the raw values a
 * partition of unity everywhere.
 */
class SplineBasis {
 public:
  /// Full knot vector, including the repeated boundary knots.
  SplineBasis(int degree, std::vector<double> knots);

  /// Equally spaced interior knots on [lo, hi] giving `size` basis functions.
  static SplineBasis uniform(double lo, double hi, std::size_t size, int degree);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] double lo() const noexcept { return knots_.front(); }
  [[nodiscard]] double hi() const noexcept { return knots_.back(); }
  [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }

  /// Raw basis values at x, written into out (length size()).
  void eval(double x, std::span<double> out) const;
  [[nodiscard]] std::vector<double> eval(double x) const;

  friend bool operator==(const SplineBasis&, const SplineBasis&) = default;

 private:
  int degree_;
  std::vector<double> knots_;
  std::size_t size_;
};

/// Empirical quantile with linear interpolation between order statistics.
/// `sorted` must be nonempty and ascending.
double quantile_sorted(std::span<const double> sorted, double q);

/**
 * Builds a clamped basis whose interior knots are equally spaced between
 * the q_lo and q_hi empirical quantiles of `samples`.
 *
 * Throws ErrorCode::insufficient_data on an empty sample and
 * ErrorCode::degenerate_covariate when the quantile range has zero width.
 */
SplineBasis make_knots(std::span<const double> samples, std::size_t v, int degree,
                       double q_lo, double q_hi);

/// Running mean of raw basis vectors, used to center the design.
struct CenteringState {
  std::size_t count = 0;
  std::vector<double> mean;

  friend bool operator==(const CenteringState&, const CenteringState&) = default;
};

void update_centering(CenteringState& state, std::span<const double> raw_values);

/// Raw basis values at x minus the running mean. Does not touch `state`.
void centered_eval(const SplineBasis& basis, const CenteringState& state, double x,
                   std::span<double> out);
[[nodiscard]] std::vector<double> centered_eval(const SplineBasis& basis,
                                                const CenteringState& state, double x);

}  // namespace slants
