#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "slants/error.hpp"
#include "slants/selection.hpp"

using namespace slants;

namespace {

// Samples with three independent uniform covariates and y = g(x) + noise.
template <typename F>
std::vector<RegressionSample> make_samples(std::size_t n, double noise, F g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::normal_distribution<double> normal;
  std::vector<RegressionSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    RegressionSample s;
    s.covariates = {unif(gen), unif(gen), unif(gen)};
    s.y = g(s.covariates) + noise * normal(gen);
    s.t = i + 1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("Step-2 basis size and penalty") {
  CHECK(step2_basis_size(500, 0.4, 2) == 12);
  CHECK(step2_basis_size(1000, 0.4, 2) == 16);
  CHECK(step2_basis_size(2, 0.4, 2) == 3);
  CHECK(bic_penalty(12, 500) == doctest::Approx(12.0 * std::log(500.0) / 500.0));
}

TEST_CASE("empty subset gives the variance of y") {
  const auto s = make_samples(200, 1.0, [](const auto&) { return 3.0; }, 1);
  double mean = 0.0;
  for (const auto& x : s) mean += x.y / 200.0;
  double var = 0.0;
  for (const auto& x : s) var += (x.y - mean) * (x.y - mean) / 200.0;
  CHECK(fit_subset_mse(s, std::vector<std::size_t>{}, 6) == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("quadratic splines reproduce a quadratic exactly") {
  const auto s = make_samples(150, 0.0, [](const auto& x) { return 1.0 + 2.0 * x[1] - 3.0 * x[1] * x[1]; }, 2);
  CHECK(fit_subset_mse(s, std::vector<std::size_t>{1}, 5, 2) < 1e-8);
}

TEST_CASE("subset fits agree with a QR solve") {
  const auto s = make_samples(
      300, 0.3, [](const auto& x) { return std::sin(3.0 * x[0]) + x[2] * x[2]; }, 3);
  for (const std::vector<std::size_t>& subset :
       {std::vector<std::size_t>{0}, {2}, {0, 2}, {0, 1, 2}, {1}}) {
    const double got = fit_subset_mse(s, subset, 7, 2);
    const double want = oracle::subset_mse_qr(s, subset, 7, 2);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("larger subsets never fit worse") {
  const auto s = make_samples(
      250, 0.5, [](const auto& x) { return x[0] - x[1] * x[1]; }, 4);
  const std::vector<std::size_t> a{0};
  const std::vector<std::size_t> b{0, 1};
  const std::vector<std::size_t> c{0, 1, 2};
  const double ma = fit_subset_mse(s, a, 6);
  const double mb = fit_subset_mse(s, b, 6);
  const double mc = fit_subset_mse(s, c, 6);
  CHECK(mb <= ma + 1e-8);
  CHECK(mc <= mb + 1e-8);
}

TEST_CASE("too few samples for the subset fit") {
  const auto s = make_samples(10, 0.1, [](const auto& x) { return x[0]; }, 5);
  try {
    (void)fit_subset_mse(s, std::vector<std::size_t>{0, 1, 2}, 6);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::underdetermined);
    CHECK(std::string(e.what()) == "Step 2 underdetermined");
  }
}

TEST_CASE("backward selection") {
  auto truth = [](const auto& x) { return 2.0 * x[0] * x[0] - 1.5 * x[2]; };
  const auto s = make_samples(1000, 0.3, truth, 6);
  const std::size_t t1 = 1000;

  SUBCASE("no redundancy keeps the candidate set") {
    const auto r = backward_select(s, {0, 2}, t1);
    CHECK(r.selected == std::vector<std::size_t>{0, 2});
    CHECK(r.removed.empty());
  }
  SUBCASE("a noise covariate is removed") {
    const auto r = backward_select(s, {0, 1, 2}, t1);
    CHECK(r.selected == std::vector<std::size_t>{0, 2});
    CHECK(r.removed == std::vector<std::size_t>{1});
    CHECK(r.basis_size == step2_basis_size(t1, 0.4, 2));
    CHECK(r.penalty == doctest::Approx(bic_penalty(r.basis_size, t1)));
    // MSE path is nondecreasing as covariates leave.
    for (std::size_t k = 1; k < r.mse_path.size(); ++k) CHECK(r.mse_path[k] >= r.mse_path[k - 1] - 1e-8);
  }
  SUBCASE("zero penalty keeps everything") {
    BackwardOptions o;
    o.penalty = 0.0;
    CHECK(backward_select(s, {0, 1, 2}, t1, o).selected == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("infinite penalty removes everything") {
    BackwardOptions o;
    o.penalty = std::numeric_limits<double>::infinity();
    const auto r = backward_select(s, {0, 1, 2}, t1, o);
    CHECK(r.selected.empty());
    CHECK(r.removed.size() == 3);
  }
  SUBCASE("result is nested in the candidates") {
    const auto r = backward_select(s, {2, 1}, t1);
    for (auto c : r.selected) CHECK((c == 1 || c == 2));
  }
}

TEST_CASE("edge labels") {
  CHECK(CausalEdge{5, 8, {1}}.label() == "1");
  CHECK(CausalEdge{5, 8, {1, 2}}.label() == "12");
  CHECK(CausalEdge{0, 0, {1, 2, 52, 54}}.label() == "1,2,52,54");
}

TEST_CASE("graph extraction") {
  const std::size_t D = 9;
  const std::size_t L = 2;
  const GroupLayout lay{D * L, 3};
  std::vector<Coefficients> per_target(D, Coefficients(lay));

  SUBCASE("all zero") {
    const auto g = extract_graph(per_target, L);
    CHECK(g.edges.empty());
    CHECK(g.to_dot() == "digraph causality {\n}\n");
  }
  SUBCASE("two parents of one target") {
    per_target[8].group(covariate_index(5, 1, L))[0] = 0.7;
    per_target[8].group(covariate_index(6, 2, L))[2] = -0.1;
    const auto g = extract_graph(per_target, L);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == CausalEdge{5, 8, {1}});
    CHECK(g.edges[1] == CausalEdge{6, 8, {2}});
    CHECK(g.to_dot() == "digraph causality {\n  6 -> 9 [label=\"1\"];\n  7 -> 9 [label=\"2\"];\n}\n");
  }
  SUBCASE("both lags of one source share an edge") {
    per_target[8].group(covariate_index(5, 1, L))[0] = 1.0;
    per_target[8].group(covariate_index(5, 2, L))[1] = 1.0;
    const auto g = extract_graph(per_target, L);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].label() == "12");
  }
  SUBCASE("round-off sized groups are ignored and output is deterministic") {
    per_target[0].group(0)[0] = 1e-12;
    per_target[3].group(covariate_index(2, 2, L))[0] = 0.5;
    const auto a = extract_graph(per_target, L);
    const auto b = extract_graph(per_target, L);
    CHECK(a == b);
    REQUIRE(a.edges.size() == 1);
    CHECK(a.edges[0] == CausalEdge{2, 3, {2}});
  }
}
