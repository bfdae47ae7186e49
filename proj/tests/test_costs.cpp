#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dynstrat/costs.hpp"
#include "dynstrat/errors.hpp"
#include "dynstrat/estimators.hpp"
#include "oracles.hpp"

using namespace dynstrat;

TEST_CASE("difference coefficients") {
  auto d = difference_coefficients(sma_filter(2));
  REQUIRE(d.size() == 4);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(0.5));
  CHECK(d[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(d[3] == doctest::Approx(-0.5));
}

TEST_CASE("frozen turnover and utility") {
  auto p = ReturnProcess::ar(1.0, {0.5});
  auto f = sma_filter(2);
  CHECK(expected_turnover(f, p) == doctest::Approx(0.488602511902919922).epsilon(1e-14));
  CHECK(tc_utility(f, p, {1.0, 0.01}) == doctest::Approx(-0.520511025119029199).epsilon(1e-14));
  // White noise, unit lag-1 weight: X_t - X_{t-1} = R_{t-1} - R_{t-2}, E|.| = sqrt(2) sqrt(2/pi).
  CHECK(expected_turnover(custom_filter({1.0}), ReturnProcess::white_noise(1.0)) ==
        doctest::Approx(std::sqrt(2.0) * 0.797884560802865356).epsilon(1e-14));
  CHECK_THROWS_AS(tc_utility(f, p, {-1.0, 0.0}), Error);
  CHECK_THROWS_AS(tc_utility(f, p, {1.0, -0.1}), Error);
}

TEST_CASE("surrogate agrees with the correct utility for unit-variance signals") {
  auto p = ReturnProcess::arma(1.0, {0.4}, {0.2});
  auto f = ewma_filter(0.6, 10);
  const double s = std::sqrt(filter_quadratic_form(f, p));
  for (double& c : f.coeffs) c /= s;
  CostSpec cost{0.7, 0.05};
  CHECK(tc_utility_surrogate(f, p, cost) == doctest::Approx(tc_utility(f, p, cost)));
  auto g = sma_filter(3);
  CHECK(tc_utility_surrogate(g, p, cost) != doctest::Approx(tc_utility(g, p, cost)));
}

TEST_CASE("turnover and utility against simulation") {
  auto p = ReturnProcess::ar(0.5, {0.3});
  auto f = ewma_filter(0.7, 12);
  CostSpec cost{2.0, 0.1};
  auto r = simulate_returns(p, 400000, 31);
  auto x = apply_filter(f, r);
  const std::size_t k = f.size();
  std::vector<double> turn, s;
  for (std::size_t i = 1; i < x.size(); ++i) turn.push_back(std::abs(x[i] - x[i - 1]));
  for (std::size_t i = 0; i < x.size(); ++i) s.push_back(x[i] * r[i + k]);
  // Serial dependence: compare within a generous multiple of the iid stderr.
  auto mt = oracle::mean_se(turn);
  CHECK(std::abs(mt.mean - expected_turnover(f, p)) < 10 * mt.se);
  auto ms = oracle::mean_se(s);
  double v = 0;
  for (double z : s) v += (z - ms.mean) * (z - ms.mean);
  v /= s.size() - 1.0;
  const double u = ms.mean - cost.gamma_risk * v - cost.nu * mt.mean;
  CHECK(u == doctest::Approx(tc_utility(f, p, cost)).epsilon(0.03));
}

TEST_CASE("smoothed utility gradient") {
  auto p = ReturnProcess::arma(1.0, {0.5}, {0.3});
  CostSpec cost{0.5, 0.02};
  std::vector<double> phi{0.3, -0.2, 0.15, 0.4};
  std::vector<double> grad;
  const double u = tc_utility_smoothed(phi, p, cost, &grad);
  CHECK(u == doctest::Approx(tc_utility(custom_filter(phi), p, cost)).epsilon(1e-10));
  REQUIRE(grad.size() == phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    auto a = phi, b = phi;
    const double h = 1e-6;
    a[j] += h;
    b[j] -= h;
    const double fd = (tc_utility_smoothed(a, p, cost, nullptr) - tc_utility_smoothed(b, p, cost, nullptr)) / (2 * h);
    CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("optimizer") {
  auto p = ReturnProcess::arma(1.0, {0.5}, {0.3});
  SUBCASE("no costs, one lag: the last return is the only choice") {
    auto res = optimize_tc_utility(p, 1, {1.0, 0.0});
    CHECK(res.converged);
    CHECK(res.correlation == doctest::Approx(p.acf(1)).epsilon(1e-6));
    CHECK(res.gradient_check < 1e-4);
  }
  SUBCASE("no costs, five lags: the correlation ceiling") {
    auto res = optimize_tc_utility(p, 5, {1.0, 0.0});
    const double ceiling = signal_return_correlation(max_correlation_filter(p, 5), p);
    CHECK(res.correlation == doctest::Approx(ceiling).epsilon(1e-5));
    for (double su : res.start_utilities) CHECK(res.utility >= su - 1e-12);
  }
  SUBCASE("costs shrink turnover") {
    auto cheap = optimize_tc_utility(p, 5, {1.0, 0.0});
    auto dear = optimize_tc_utility(p, 5, {1.0, 0.2});
    CHECK(expected_turnover(dear.filter, p) < expected_turnover(cheap.filter, p));
    CHECK(dear.utility <= cheap.utility);
  }
  SUBCASE("deterministic for a seed") {
    auto a = optimize_tc_utility(p, 4, {1.0, 0.05}, std::nullopt, 7);
    auto b = optimize_tc_utility(p, 4, {1.0, 0.05}, std::nullopt, 7);
    CHECK(a.filter.coeffs == b.filter.coeffs);
    CHECK(a.best_start == b.best_start);
  }
  CHECK_THROWS_AS(optimize_tc_utility(p, 0, {1.0, 0.0}), Error);
}

TEST_CASE("turnover is positively homogeneous; utility is finite on a box") {
  auto p = ReturnProcess::arma(1.0, {0.5}, {0.3});
  auto f = custom_filter({0.4, -0.1, 0.25});
  auto g = f;
  for (double& c : g.coeffs) c *= 3.0;
  CHECK(expected_turnover(g, p) == doctest::Approx(3.0 * expected_turnover(f, p)).epsilon(1e-13));
  CostSpec only_cost{0.0, 0.1};
  const double base = tc_utility(f, p, only_cost) - tc_utility(f, p, {0.0, 0.0});
  CHECK(tc_utility(g, p, only_cost) - tc_utility(g, p, {0.0, 0.0}) == doctest::Approx(3.0 * base).epsilon(1e-12));
  for (double a = -2; a <= 2; a += 0.25)
    for (double b = -2; b <= 2; b += 0.25) {
      const double u = tc_utility(custom_filter({a, b}), p, {1.0, 0.05});
      CHECK(std::isfinite(u));
    }
}
