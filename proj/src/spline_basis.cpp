#include "slants/spline_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slants/error.hpp"

namespace slants {

SplineBasis::SplineBasis(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)), size_(0) {
  if (degree_ < 0) throw Error(ErrorCode::invalid_argument, "spline degree must be nonnegative");
  const auto order = static_cast<std::size_t>(degree_) + 1;
  if (knots_.size() < 2 * order) {
    throw Error(ErrorCode::invalid_argument, "knot vector too short for the spline degree");
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw Error(ErrorCode::invalid_argument, "knots must be nondecreasing");
  }
  if (!(knots_.back() > knots_.front())) {
    throw Error(ErrorCode::degenerate_covariate, "degenerate covariate");
  }
  size_ = knots_.size() - order;
}

SplineBasis SplineBasis::uniform(double lo, double hi, std::size_t size, int degree) {
  if (degree < 0 || size <= static_cast<std::size_t>(degree)) {
    throw Error(ErrorCode::invalid_argument, "basis size must exceed the spline degree");
  }
  if (!(hi > lo)) throw Error(ErrorCode::degenerate_covariate, "degenerate covariate");
  const std::size_t intervals = size - static_cast<std::size_t>(degree);
  std::vector<double> knots;
  knots.reserve(size + static_cast<std::size_t>(degree) + 1);
  knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, lo);
  for (std::size_t k = 1; k < intervals; ++k) {
    knots.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(intervals));
  }
  knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, hi);
  return SplineBasis(degree, std::move(knots));
}

void SplineBasis::eval(double x, std::span<double> out) const {
  if (out.size() != size_) throw Error(ErrorCode::dimension_mismatch, "basis output length mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t p = static_cast<std::size_t>(degree_);
  const double lo_ = lo();
  const double hi_ = hi();
  if (std::isnan(x)) x = lo_;
  x = std::clamp(x, lo_, hi_);

  // Knot span containing x; the right endpoint belongs to the last nonempty span.
  std::size_t span;
  if (x >= knots_[size_]) {
    span = size_ - 1;
    while (span > p && knots_[span] == knots_[span + 1]) --span;
  } else {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    span = static_cast<std::size_t>(it - knots_.begin()) - 1;
    span = std::clamp(span, p, size_ - 1);
  }

  // Triangular Cox-de Boor scheme over the p+1 nonzero functions.
  double local[32];
  double left[32];
  double right[32];
  std::vector<double> heap;
  double* n = local;
  double* l = left;
  double* r = right;
  if (p + 1 > 32) {
    heap.resize(3 * (p + 1));
    n = heap.data();
    l = n + p + 1;
    r = l + p + 1;
  }
  n[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    l[j] = x - knots_[span + 1 - j];
    r[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (std::size_t k = 0; k < j; ++k) {
      const double denom = r[k + 1] + l[j - k];
      const double temp = denom > 0.0 ? n[k] / denom : 0.0;
      n[k] = saved + r[k + 1] * temp;
      saved = l[j - k] * temp;
    }
    n[j] = saved;
  }
  for (std::size_t j = 0; j <= p; ++j) out[span - p + j] = n[j];
}

std::vector<double> SplineBasis::eval(double x) const {
  std::vector<double> out(size_);
  eval(x, out);
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::insufficient_data, "insufficient warm-up data");
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

SplineBasis make_knots(std::span<const double> samples, std::size_t v, int degree, double q_lo,
                       double q_hi) {
  if (samples.empty()) throw Error(ErrorCode::insufficient_data, "insufficient warm-up data");
  if (degree < 0 || v <= static_cast<std::size_t>(degree)) {
    throw Error(ErrorCode::invalid_argument, "basis size must exceed the spline degree");
  }
  if (!(q_lo < q_hi) || q_lo < 0.0 || q_hi > 1.0) {
    throw Error(ErrorCode::invalid_argument, "quantile levels must satisfy 0 <= q_lo < q_hi <= 1");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = quantile_sorted(sorted, q_lo);
  const double hi = quantile_sorted(sorted, q_hi);
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::degenerate_covariate, "degenerate covariate");
  }
  return SplineBasis::uniform(lo, hi, v, degree);
}

void update_centering(CenteringState& state, std::span<const double> raw_values) {
  if (state.count == 0 && state.mean.empty()) state.mean.assign(raw_values.size(), 0.0);
  if (raw_values.size() != state.mean.size()) {
    throw Error(ErrorCode::dimension_mismatch, "centering update length mismatch");
  }
  ++state.count;
  const double inv = 1.0 / static_cast<double>(state.count);
  for (std::size_t j = 0; j < raw_values.size(); ++j) {
    state.mean[j] += (raw_values[j] - state.mean[j]) * inv;
  }
}

void centered_eval(const SplineBasis& basis, const CenteringState& state, double x,
                   std::span<double> out) {
  if (state.count == 0) throw Error(ErrorCode::not_initialized, "centering not initialized");
  if (state.mean.size() != basis.size()) {
    throw Error(ErrorCode::dimension_mismatch, "centering state does not match the basis");
  }
  basis.eval(x, out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= state.mean[j];
}

std::vector<double> centered_eval(const SplineBasis& basis, const CenteringState& state,
                                  double x) {
  std::vector<double> out(basis.size());
  centered_eval(basis, state, x, out);
  return out;
}

}  // namespace slants
