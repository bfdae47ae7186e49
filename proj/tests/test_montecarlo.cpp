#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "dynstrat/analytics.hpp"
#include "dynstrat/errors.hpp"
#include "dynstrat/kernels.hpp"
#include "dynstrat/montecarlo.hpp"
#include "dynstrat/parallel.hpp"
#include "dynstrat/standard_errors.hpp"
#include "oracles.hpp"

using namespace dynstrat;

TEST_CASE("kernel selection honours DYNSTRAT_SIMD") {
  const char* env = std::getenv("DYNSTRAT_SIMD");
  if (env && std::string(env) == "scalar") CHECK(kernels::active_isa() == kernels::Isa::scalar);
  MESSAGE("kernels: " << kernels::isa_name(kernels::active_isa()));
}

TEST_CASE("strategy paths are aligned and independent of thread count") {
  SimulationPlan plan{ReturnProcess::ar(1.0, {0.3}), ewma_filter(0.8, 15), 3000, 6, 99};
  set_thread_limit(1);
  auto one = simulate_strategy_paths(plan);
  set_thread_limit(4);
  auto four = simulate_strategy_paths(plan);
  set_thread_limit(0);
  REQUIRE(one.size() == 6);
  for (std::size_t p = 0; p < 6; ++p) {
    CHECK(one[p].strategy == four[p].strategy);
    CHECK(one[p].returns.size() == 3000 - 15);
  }
  auto r = simulate_returns(plan.process, plan.path_length, plan.seed, 2);
  auto x = apply_filter(plan.filter, r);
  for (std::size_t i = 0; i < x.size(); i += 97) {
    CHECK(one[2].signals[i] == doctest::Approx(x[i]).epsilon(1e-13).scale(1e-12));
    CHECK(one[2].returns[i] == r[i + 15]);
    CHECK(one[2].strategy[i] == doctest::Approx(one[2].signals[i] * one[2].returns[i]).scale(1e-300));
  }
  CHECK_THROWS_AS(simulate_strategy_paths({ReturnProcess::white_noise(1), sma_filter(5), 5, 1, 0}), Error);
}

TEST_CASE("empirical moments on a fixed sample") {
  std::vector<double> x{1, 2, 3, 4, 4, 3, 2, 1};
  auto m = empirical_moments(x);
  CHECK(m.n == 8);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(1.25));
  CHECK(m.skewness == doctest::Approx(0.0).scale(1.0));
  CHECK(m.kurtosis == doctest::Approx(1.64));
  CHECK(m.sharpe == doctest::Approx(2.5 / std::sqrt(1.25)));
  std::vector<double> flat(100, 3.0);
  CHECK_FALSE(empirical_moments(flat).flag.empty());
}

TEST_CASE("jackknife of the mean matches the iid standard error") {
  oracle::PairSource src(0.0, 4);
  std::vector<double> x;
  for (int i = 0; i < 100000; ++i) x.push_back(src().first);
  auto m = empirical_moments(x);
  const auto ms = oracle::mean_se(x);
  CHECK(m.se_mean == doctest::Approx(ms.se).epsilon(0.1));
  std::vector<std::vector<double>> blocks;
  for (std::size_t b = 0; b < 100; ++b) {
    double s = 0;
    for (std::size_t i = b * 1000; i < (b + 1) * 1000; ++i) s += x[i];
    blocks.push_back({s, 1000.0});
  }
  auto j = block_jackknife(blocks, [](const std::vector<double>& v) { return v[0] / v[1]; });
  CHECK(j.value == doctest::Approx(ms.mean));
  CHECK(j.se == doctest::Approx(ms.se).epsilon(0.2));
}

TEST_CASE("simulated products match the closed forms") {
  const double rho = 0.3;
  auto s = simulate_product_pairs(rho, 1000000, 5);
  auto m = empirical_moments(s);
  auto d = dimensionless_stats(rho);
  CHECK(std::abs(m.mean - rho) < 4 * m.se_mean);
  CHECK(std::abs(m.variance - (1 + rho * rho)) < 4 * m.se_variance);
  CHECK(std::abs(m.skewness - d.skewness) < 4 * m.se_skewness);
  CHECK(std::abs(m.kurtosis - d.kurtosis) < 4 * m.se_kurtosis);
  CHECK(std::abs(m.sharpe - d.sharpe) < 4 * m.se_sharpe);

  set_thread_limit(3);
  auto again = simulate_product_pairs(rho, 200000, 5);
  set_thread_limit(0);
  for (std::size_t i = 0; i < again.size(); i += 1013) CHECK(again[i] == s[i]);

  auto multi = simulate_multi_asset(16, 0.2, 200000, 6);
  auto mm = empirical_moments(multi);
  auto a = multi_asset_stats(16, 0.2);
  CHECK(std::abs(mm.sharpe - a.sharpe) < 4 * mm.se_sharpe);
  CHECK(std::abs(mm.skewness - a.skewness) < 4 * mm.se_skewness);
}

TEST_CASE("empirical correlation") {
  oracle::PairSource src(0.6, 8);
  std::vector<double> x, y;
  for (int i = 0; i < 50000; ++i) {
    auto [a, b] = src();
    x.push_back(a);
    y.push_back(b);
  }
  auto c = empirical_correlation(x, y);
  CHECK(c.value == doctest::Approx(oracle::sample_corr(x, y)).epsilon(1e-12));
  CHECK(c.se == doctest::Approx(0.64 / std::sqrt(50000.0)).epsilon(0.2));
}

TEST_CASE("coverage of the nominal 95% intervals") {
  for (auto method : {CoverageMethod::implied_exact, CoverageMethod::lo, CoverageMethod::mertens}) {
    auto c = coverage_experiment(0.3, 500, 2000, method, 12);
    CAPTURE(to_string(method));
    CHECK(c.n_trials == 2000);
    CHECK(c.coverage > 0.90);
    CHECK(c.coverage < 0.99);
  }
  auto exact = coverage_experiment(0.3, 500, 2000, CoverageMethod::implied_exact, 12);
  CHECK(std::abs(exact.coverage - 0.95) < 4 * exact.coverage_stderr + 0.005);
  CHECK(exact.true_value == doctest::Approx(dimensionless_stats(0.3).sharpe));
  CHECK(coverage_method_from_string("implied") == CoverageMethod::implied_exact);
  CHECK_THROWS_AS(coverage_method_from_string("bogus"), Error);
}

TEST_CASE("bootstrap spread agrees with the implied error for small rho") {
  for (double rho : {0.0, 0.1, 0.3}) {
    const long t = 2000;
    const double sd = bootstrap_sharpe_sd(rho, t, 400, 3);
    CHECK(sd == doctest::Approx(stderr_sharpe_implied(rho, t)).epsilon(0.15));
  }
}

TEST_CASE("bootstrap spread at rho = 0.6 follows the exact sampling law") {
  // sd(rho_hat) is (1 - rho^2)/sqrt(T); the implied error uses sqrt(1 - rho^2), larger by 1/sqrt(1 - rho^2).
  const double rho = 0.6;
  const long t = 2000;
  const double sd = bootstrap_sharpe_sd(rho, t, 400, 3);
  const double exact = (1 - rho * rho) / std::pow(1 + rho * rho, 1.5) / std::sqrt(double(t));
  CHECK(sd == doctest::Approx(exact).epsilon(0.15));
  CHECK(stderr_sharpe_implied(rho, t) / exact == doctest::Approx(1 / std::sqrt(1 - rho * rho)).epsilon(0.01));
}

TEST_CASE("empirical kurtosis never falls significantly below nine") {
  auto p = ReturnProcess::arma(1.0, {0.5}, {0.3});
  for (auto f : {sma_filter(4), ewma_filter(0.7, 30), custom_filter({1.0, -0.5})}) {
    SimulationPlan plan{p, f, 200000, 1, 42};
    auto paths = simulate_strategy_paths(plan);
    auto m = empirical_moments(paths[0].strategy);
    CHECK(m.kurtosis > 9.0 - 4 * m.se_kurtosis);
  }
}

TEST_CASE("KS distance") {
  CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_distance({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("truncated non-Gaussian pairs approach the product-normal law") {
  auto p = ReturnProcess::ar(1.0, {0.9});
  auto f = ewma_filter(0.9, 30);
  const std::size_t draws = 40000;
  // Two-sample KS critical value at the 0.1% level.
  const double crit = 1.95 * std::sqrt(2.0 / draws);
  auto gauss = convergence_demo(p, f, {2, 8, 32}, Innovation::gaussian, draws, 2);
  for (auto& pt : gauss) CHECK(pt.distance < crit);

  auto uni = convergence_demo(p, f, {2, 8, 32, 128, 512}, Innovation::uniform, draws, 3);
  REQUIRE(uni.size() == 5);
  for (std::size_t i = 1; i < uni.size(); ++i) {
    CHECK(uni[i].distance < uni[0].distance);
    CHECK(uni[i].distance <= uni[i - 1].distance + crit);
  }
  CHECK(uni[4].correlation == doctest::Approx(signal_return_correlation(f, p)).epsilon(1e-3));
}
