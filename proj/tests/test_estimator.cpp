#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "slants/error.hpp"
#include "slants/estimator.hpp"

using namespace slants;

namespace {

Eigen::MatrixXd random_design(std::size_t n, std::size_t p, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    Z(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < Z.cols(); ++j) Z(i, j) = normal(gen);
  }
  return Z;
}

SufficientStats harmonic_stats(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
  SufficientStats st(static_cast<std::size_t>(Z.cols()));
  std::vector<double> row(static_cast<std::size_t>(Z.cols()));
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    for (Eigen::Index j = 0; j < Z.cols(); ++j) row[static_cast<std::size_t>(j)] = Z(i, j);
    update_stats(st, row, y[i], 1.0 / static_cast<double>(st.t + 1));
  }
  return st;
}

}  // namespace

TEST_CASE("first update with unit weight") {
  SufficientStats st(3);
  const std::vector<double> z{1.0, 2.0, -1.0};
  update_stats(st, z, 0.5, 1.0);
  CHECK(st.t == 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(st.B[i] == 0.5 * z[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 3; ++j) CHECK(st.A(i, j) == z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("harmonic weights give the batch average") {
  std::mt19937_64 gen(2);
  const auto Z = random_design(300, 7, gen);
  Eigen::VectorXd y = Eigen::VectorXd::Random(300);
  const auto st = harmonic_stats(Z, y);
  const Eigen::MatrixXd A = Z.transpose() * Z / 300.0;
  const Eigen::VectorXd B = Z.transpose() * y / 300.0;
  CHECK((st.A - A).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((st.B - B).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((st.A - st.A.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  std::normal_distribution<double> normal;
  for (int probe = 0; probe < 50; ++probe) {
    Eigen::VectorXd u(7);
    for (auto& x : u) x = normal(gen);
    CHECK(u.dot(st.A * u) >= 0.0);
  }
}

TEST_CASE("constant step size gives geometric weights") {
  std::mt19937_64 gen(4);
  const std::size_t T = 200;
  const double c = 0.01;
  const auto Z = random_design(T, 5, gen);
  Eigen::VectorXd y = Eigen::VectorXd::Random(static_cast<Eigen::Index>(T));
  SufficientStats st(5);
  std::vector<double> row(5);
  for (std::size_t t = 0; t < T; ++t) {
    for (int j = 0; j < 5; ++j) row[static_cast<std::size_t>(j)] = Z(static_cast<Eigen::Index>(t), j);
    // The first arrival takes full weight, as in the recursion's start.
    update_stats(st, row, y[static_cast<Eigen::Index>(t)], t == 0 ? 1.0 : c);
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5, 5);
  Eigen::VectorXd B = Eigen::VectorXd::Zero(5);
  for (std::size_t t = 0; t < T; ++t) {
    const double w = (t == 0 ? 1.0 : c) * std::pow(1.0 - c, static_cast<double>(T - 1 - t));
    const Eigen::VectorXd z = Z.row(static_cast<Eigen::Index>(t)).transpose();
    A += w * z * z.transpose();
    B += w * y[static_cast<Eigen::Index>(t)] * z;
  }
  CHECK((st.A - A).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((st.B - B).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("update argument checks") {
  SufficientStats st(3);
  const std::vector<double> z{1.0, 2.0, 3.0};
  const std::vector<double> short_row{1.0, 2.0};
  CHECK_THROWS_AS(update_stats(st, short_row, 0.0, 0.5), Error);
  CHECK_THROWS_AS(update_stats(st, z, 0.0, 0.0), Error);
  CHECK_THROWS_AS(update_stats(st, z, 0.0, 1.5), Error);
}

TEST_CASE("E-step") {
  const GroupLayout lay{2, 2};
  SufficientStats st(lay.dimension());
  st.B << 1.0, 2.0, 3.0, 4.0, 5.0;
  SUBCASE("zero coefficients") {
    const auto r = e_step(st, Coefficients(lay), 0.3);
    CHECK((r - 0.09 * st.B).norm() < 1e-15);
  }
  SUBCASE("identity Gram and unit tau annihilate beta") {
    st.A.setIdentity();
    Eigen::VectorXd b(5);
    b << 9.0, -3.0, 2.0, 7.0, 1.0;
    const auto r = e_step(st, Coefficients(lay, b), 1.0);
    CHECK((r - st.B).norm() < 1e-15);
  }
  SUBCASE("random instance") {
    std::mt19937_64 gen(8);
    const auto Z = random_design(40, 5, gen);
    const auto s = harmonic_stats(Z, Eigen::VectorXd::Random(40));
    const Eigen::VectorXd b = Eigen::VectorXd::Random(5);
    const auto r = e_step(s, Coefficients(lay, b), 0.4);
    const auto ref = oracle::e_step(s.A, s.B, b, 0.4);
    for (int i = 0; i < 5; ++i) CHECK(r[i] == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-13));
  }
}

TEST_CASE("group soft threshold") {
  const GroupLayout lay{1, 2};
  Eigen::VectorXd r(3);
  r << 7.0, 3.0, 4.0;
  SUBCASE("kills a group at its norm") {
    const auto b = group_soft_threshold(r, 5.0, lay);
    CHECK(b.intercept() == 7.0);
    CHECK(b.group(0).norm() == 0.0);
  }
  SUBCASE("halves a group at half its norm") {
    const auto b = group_soft_threshold(r, 2.5, lay);
    CHECK(b.values()[1] == doctest::Approx(1.5));
    CHECK(b.values()[2] == doctest::Approx(2.0));
    CHECK(b.intercept() == 7.0);
  }
  SUBCASE("zero threshold is the identity") {
    CHECK(group_soft_threshold(r, 0.0, lay).values() == r);
  }
  SUBCASE("zero group stays zero") {
    Eigen::VectorXd z(3);
    z << 1.0, 0.0, 0.0;
    CHECK(group_soft_threshold(z, 1.0, lay).group(0).norm() == 0.0);
  }
}

TEST_CASE("M-step is nonexpansive in all three regimes") {
  // Regimes: both groups thresholded to zero, exactly one, neither.
  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.0, 3.0);
  const GroupLayout lay{1, 4};
  const double threshold = 1.0;
  int counts[3] = {0, 0, 0};
  double worst = -1.0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::VectorXd a(5);
    Eigen::VectorXd b(5);
    for (auto& x : a) x = normal(gen);
    for (auto& x : b) x = normal(gen);
    const int regime = i % 3;
    auto set_norm = [&](Eigen::VectorXd& v, double n) { v.tail(4) *= n / v.tail(4).norm(); };
    if (regime == 0) {
      set_norm(a, scale(gen) / 3.0);
      set_norm(b, scale(gen) / 3.0);
    } else if (regime == 1) {
      set_norm(a, scale(gen) / 3.0);
      set_norm(b, 1.0 + scale(gen));
    } else {
      set_norm(a, 1.0 + scale(gen));
      set_norm(b, 1.0 + scale(gen));
    }
    const int zeros = (a.tail(4).norm() <= threshold) + (b.tail(4).norm() <= threshold);
    ++counts[2 - zeros];
    const auto ga = group_soft_threshold(a, threshold, lay).values();
    const auto gb = group_soft_threshold(b, threshold, lay).values();
    worst = std::max(worst, (ga - gb).norm() - (a - b).norm());
  }
  CHECK(counts[0] > 3000);
  CHECK(counts[1] > 3000);
  CHECK(counts[2] > 3000);
  CHECK(worst <= 1e-12);
}

TEST_CASE("EM with a huge penalty stops at the intercept-only model") {
  std::mt19937_64 gen(5);
  const GroupLayout lay{3, 2};
  const auto Z = random_design(60, lay.dimension(), gen);
  Eigen::VectorXd y = Eigen::VectorXd::Random(60).array() + 2.0;
  const auto st = harmonic_stats(Z, y);
  const double tau = 0.5 / std::sqrt(oracle::max_eigenvalue(st.A));
  const auto res = em_iterate(st, Coefficients(lay), {tau, 1e6, 50, 1e-12});
  for (std::size_t g = 0; g < 3; ++g) CHECK_FALSE(res.beta.group_active(g));
  CHECK(res.beta.intercept() != 0.0);
}

TEST_CASE("EM decreases the objective and contracts") {
  std::mt19937_64 gen(9);
  const GroupLayout lay{4, 3};
  for (int rep = 0; rep < 10; ++rep) {
    const auto Z = random_design(120, lay.dimension(), gen);
    Eigen::VectorXd y = Z.col(1) - 0.5 * Z.col(5) + 0.3 * Eigen::VectorXd::Random(120);
    const auto st = harmonic_stats(Z, y);
    const double tau = 0.8 / std::sqrt(oracle::max_eigenvalue(st.A));
    const double lambda = 0.05;
    Coefficients beta(lay);
    Coefficients prev = beta;
    double obj = penalized_objective(st, beta, lambda);
    double prev_step = -1.0;
    const double xi = contraction_radius(st, tau);
    for (int k = 0; k < 200; ++k) {
      const auto res = em_iterate(st, beta, {tau, lambda, 1, 0.0});
      const double next = penalized_objective(st, res.beta, lambda);
      CHECK(next <= obj + 1e-10);
      const double step = (res.beta.values() - beta.values()).norm();
      if (prev_step > 0.0) CHECK(step <= xi * prev_step + 1e-12);
      prev_step = step;
      obj = next;
      prev = beta;
      beta = res.beta;
    }
  }
}

TEST_CASE("spectral check") {
  SufficientStats st(3);
  st.A.setIdentity();
  CHECK(spectral_check(st, 1.0));
  CHECK(contraction_radius(st, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(spectral_check(st, 1.5));
  CHECK_FALSE(spectral_check(st, 0.0));
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 20; ++rep) {
    const auto Z = random_design(50, 8, gen);
    const auto s = harmonic_stats(Z, Eigen::VectorXd::Random(50));
    const double top = oracle::max_eigenvalue(s.A);
    CHECK(max_eigenvalue(s.A, 1e-12) == doctest::Approx(top).epsilon(1e-8));
    CHECK(max_eigenvalue(s.A) == doctest::Approx(top).epsilon(1e-4));
    const double bound = std::sqrt(2.0 / top);
    CHECK(spectral_check(s, 0.98 * bound));
    CHECK_FALSE(spectral_check(s, 1.02 * bound));
    const double tau = 0.7 * bound;
    const double want = std::max(std::abs(1.0 - tau * tau * top),
                                 std::abs(1.0 - tau * tau * oracle::min_eigenvalue(s.A)));
    CHECK(contraction_radius(s, tau) == doctest::Approx(want).epsilon(1e-5));
  }
}

TEST_CASE("inadmissible tau is reported as divergence") {
  std::mt19937_64 gen(12);
  const GroupLayout lay{2, 3};
  const auto Z = random_design(80, lay.dimension(), gen);
  const auto st = harmonic_stats(Z, Eigen::VectorXd::Random(80));
  const double tau = 3.0 / std::sqrt(oracle::max_eigenvalue(st.A));
  DivergenceMonitor monitor;
  const auto res = em_iterate(st, Coefficients(lay), {tau, 0.0, 500, 1e-12}, &monitor);
  CHECK(res.diverged);
  CHECK(std::isfinite(res.beta.values().norm()));
  const double ok_tau = 0.5 / std::sqrt(oracle::max_eigenvalue(st.A));
  DivergenceMonitor calm;
  CHECK_FALSE(em_iterate(st, Coefficients(lay), {ok_tau, 0.0, 500, 1e-12}, &calm).diverged);
}

TEST_CASE("prediction") {
  const GroupLayout lay{2, 2};
  Eigen::VectorXd b(5);
  b << 1.5, 0.0, 0.0, 0.0, 0.0;
  const std::vector<double> row{1.0, 0.3, -0.2, 4.0, 1.0};
  CHECK(predict(Coefficients(lay, b), row) == 1.5);
  b << 1.5, 0.0, 0.0, 2.5, 0.0;
  const std::vector<double> hot{1.0, 0.0, 0.0, 1.0, 0.0};
  CHECK(predict(Coefficients(lay, b), hot) == 4.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd r(5);
  std::vector<double> z(5);
  for (auto& x : r) x = normal(gen);
  for (auto& x : z) x = normal(gen);
  double ref = 0.0;
  for (int j = 4; j >= 0; --j) ref += r[j] * z[static_cast<std::size_t>(j)];
  CHECK(predict(Coefficients(lay, r), z) == doctest::Approx(ref).epsilon(1e-14));
  const std::vector<double> bad{1.0, 2.0};
  CHECK_THROWS_AS((void)predict(Coefficients(lay, r), bad), Error);
}

TEST_CASE("per-step cost grows quadratically in the covariate count") {
  // One EM iteration plus one statistics update costs a few dense
  // matrix-vector products of size 1 + D v.
  const std::size_t v = 10;
  std::vector<double> log_d;
  std::vector<double> log_t;
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  for (std::size_t D : {8, 12, 16, 24, 32}) {
    const GroupLayout lay{D, v};
    SufficientStats st(lay.dimension());
    std::vector<double> row(lay.dimension());
    for (int i = 0; i < 5; ++i) {
      for (auto& x : row) x = normal(gen);
      update_stats(st, row, normal(gen), 1.0 / (i + 1));
    }
    const double tau = 0.1 / std::sqrt(st.A.diagonal().sum());
    Coefficients beta(lay);
    std::vector<double> times;
    for (int rep = 0; rep < 9; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int k = 0; k < 40; ++k) {
        update_stats(st, row, 0.1, 0.01);
        beta = em_iterate(st, beta, {tau, 0.01, 1, 0.0}).beta;
      }
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    // The fastest repeat is the least disturbed by the scheduler.
    log_d.push_back(std::log(static_cast<double>(D)));
    log_t.push_back(std::log(*std::min_element(times.begin(), times.end())));
  }
  const double n = static_cast<double>(log_d.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < log_d.size(); ++i) {
    mx += log_d[i] / n;
    my += log_t[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < log_d.size(); ++i) {
    sxy += (log_d[i] - mx) * (log_t[i] - my);
    sxx += (log_d[i] - mx) * (log_d[i] - mx);
  }
  const double slope = sxy / sxx;
  MESSAGE("log-log slope of step cost: " << slope);
  CHECK(slope > 1.7);
  CHECK(slope < 2.3);
}
