#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "slants/error.hpp"
#include "slants/lag_embed.hpp"
#include "slants/spline_basis.hpp"

using namespace slants;

TEST_CASE("no sample until L observations are buffered") {
  SeriesWindow w(2, 8);
  const std::vector<double> x{0.1, 0.2};
  for (int i = 0; i < 8; ++i) CHECK_FALSE(w.push(x, 1).has_value());
  const auto s = w.push(x, 1);
  REQUIRE(s.has_value());
  CHECK(s->t == 9);
  CHECK(s->covariates.size() == 16);
}

TEST_CASE("AR(1) embedding") {
  SeriesWindow w(1, 1);
  CHECK_FALSE(w.push(std::vector<double>{1.0}, 0));
  const auto a = w.push(std::vector<double>{2.0}, 0);
  const auto b = w.push(std::vector<double>{3.0}, 0);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->y == 2.0);
  CHECK(a->covariates == std::vector<double>{1.0});
  CHECK(b->y == 3.0);
  CHECK(b->covariates == std::vector<double>{2.0});
}

TEST_CASE("samples match a directly built lag matrix") {
  const std::size_t D = 2;
  const std::size_t L = 2;
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> series(10, std::vector<double>(D));
  for (auto& row : series) {
    for (auto& x : row) x = normal(gen);
  }
  for (std::size_t target = 0; target < D; ++target) {
    SeriesWindow w(D, L);
    for (std::size_t t = 0; t < series.size(); ++t) {
      const auto s = w.push(series[t], target);
      if (t < L) {
        CHECK_FALSE(s);
        continue;
      }
      REQUIRE(s);
      CHECK(s->y == series[t][target]);
      for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t l = 1; l <= L; ++l) CHECK(s->covariates[d * L + l - 1] == series[t - l][d]);
      }
      // Strict past: the current observation never appears among the covariates.
      for (double c : s->covariates) {
        for (double now : series[t]) CHECK(c != now);
      }
    }
  }
}

TEST_CASE("covariate ordering is a bijection") {
  for (std::size_t L : {1, 2, 5, 12}) {
    std::set<std::size_t> seen;
    for (std::size_t d = 0; d < 4; ++d) {
      for (std::size_t l = 1; l <= L; ++l) {
        const auto i = covariate_index(d, l, L);
        CHECK(i < 4 * L);
        seen.insert(i);
        const auto [dd, ll] = covariate_source(i, L);
        CHECK(dd == d);
        CHECK(ll == l);
      }
    }
    CHECK(seen.size() == 4 * L);
  }
}

TEST_CASE("observation length is checked") {
  SeriesWindow w(3, 2);
  CHECK_THROWS_AS(w.push(std::vector<double>{1.0, 2.0}, 0), Error);
}

TEST_CASE("design row of a fully centered constant basis") {
  // A degree-0 basis with one function is identically 1.
  CovariateSpline cs;
  cs.basis = SplineBasis(0, {0.0, 1.0});
  update_centering(cs.centering, cs.basis->eval(0.5));
  RegressionSample s{0.0, {0.25}, 1};
  const std::vector<CovariateSpline> splines{cs};
  CHECK(design_row(s, splines, 1) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("design row concatenates centered blocks") {
  const std::size_t v = 3;
  std::vector<CovariateSpline> splines(3);
  splines[0].basis = SplineBasis::uniform(0.0, 1.0, v, 2);
  splines[1].basis = SplineBasis::uniform(-2.0, 2.0, v, 2);
  // splines[2] stays inactive.
  update_centering(splines[0].centering, std::vector<double>{0.2, 0.5, 0.3});
  update_centering(splines[1].centering, std::vector<double>{0.1, 0.1, 0.8});
  const RegressionSample s{1.5, {0.4, 1.1, 3.0}, 5};
  const auto row = design_row(s, splines, v);
  REQUIRE(row.size() == 1 + 3 * v);
  CHECK(row[0] == 1.0);
  const auto a = oracle::bspline_all(splines[0].basis->knots(), 2, 0.4);
  const auto b = oracle::bspline_all(splines[1].basis->knots(), 2, 1.1);
  const std::vector<double> ma{0.2, 0.5, 0.3};
  const std::vector<double> mb{0.1, 0.1, 0.8};
  for (std::size_t j = 0; j < v; ++j) {
    CHECK(row[1 + j] == doctest::Approx(a[j] - ma[j]).epsilon(1e-14));
    CHECK(row[1 + v + j] == doctest::Approx(b[j] - mb[j]).epsilon(1e-14));
    CHECK(row[1 + 2 * v + j] == 0.0);
  }
}

TEST_CASE("design row needs initialized centering") {
  std::vector<CovariateSpline> splines(1);
  splines[0].basis = SplineBasis::uniform(0.0, 1.0, 4, 2);
  const RegressionSample s{0.0, {0.5}, 1};
  CHECK_THROWS_AS((void)design_row(s, splines, 4), Error);
}
