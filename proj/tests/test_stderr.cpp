#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynstrat/analytics.hpp"
#include "dynstrat/errors.hpp"
#include "dynstrat/standard_errors.hpp"
#include "oracles.hpp"

using namespace dynstrat;

namespace {
double derivative(double (*f)(double), double x) {
  const double h = 1e-5;
  return (f(x + h) - f(x - h)) / (2 * h);
}
double sharpe_of(double r) { return dimensionless_stats(r).sharpe; }
double skew_of(double r) { return dimensionless_stats(r).skewness; }
double kurt_of(double r) { return dimensionless_stats(r).kurtosis; }
}  // namespace

TEST_CASE("implied standard errors, frozen values") {
  CHECK(stderr_sharpe_implied(0.5, 102) == doctest::Approx(0.0619677335393186690).epsilon(1e-14));
  CHECK(stderr_sharpe_implied(0.0, 252) == doctest::Approx(1.0 / std::sqrt(250.0)).epsilon(1e-14));
  CHECK(stderr_skew_implied(0.5, 102) == doctest::Approx(0.223083840741547208).epsilon(1e-13));
  CHECK(stderr_skew_implied(0.0, 252) == doctest::Approx(6.0 / std::sqrt(250.0)).epsilon(1e-13));
  CHECK(stderr_kurt_implied(0.5, 102) == doctest::Approx(9.216 * std::sqrt(0.75 / 100)).epsilon(1e-12));
  CHECK(stderr_kurt_implied(0.0, 252) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("implied standard errors are the delta method on rho_hat") {
  for (double r : {-0.9, -0.3, 0.1, 0.45, 0.8}) {
    const long t = 500;
    const double se_rho = std::sqrt((1 - r * r) / (t - 2));
    CHECK(stderr_sharpe_implied(r, t) == doctest::Approx(std::abs(derivative(sharpe_of, r)) * se_rho).epsilon(1e-8));
    CHECK(stderr_skew_implied(r, t) == doctest::Approx(std::abs(derivative(skew_of, r)) * se_rho).epsilon(1e-8));
    CHECK(stderr_kurt_implied(r, t) == doctest::Approx(std::abs(derivative(kurt_of, r)) * se_rho).epsilon(1e-7));
  }
}

TEST_CASE("Sharpe-ratio form of the implied error") {
  for (double r : {-0.95, -0.2, 0.0, 0.5, 0.99}) {
    const double sr = dimensionless_stats(r).sharpe;
    CHECK(stderr_sharpe_implied_sr(sr, 300) == doctest::Approx(stderr_sharpe_implied(r, 300)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(stderr_sharpe_implied_sr(0.71, 300), Error);
}

TEST_CASE("Lo and Mertens") {
  CHECK(stderr_sharpe_lo(0.0, 252) == doctest::Approx(0.0629940788348712045).epsilon(1e-14));
  CHECK(stderr_sharpe_lo(std::sqrt(0.5), 252) == doctest::Approx(0.0704295212273763815).epsilon(1e-14));
  // Normal moments reduce Mertens to Lo.
  CHECK(stderr_sharpe_mertens(0.3, 0.0, 3.0, 252) == doctest::Approx(stderr_sharpe_lo(0.3, 252)));
  const double sr = 0.2, g3 = 1.5, g4 = 10.0;
  CHECK(stderr_sharpe_mertens(sr, g3, g4, 100) ==
        doctest::Approx(std::sqrt((1 + 0.5 * sr * sr - g3 * sr + (g4 - 3) / 4 * sr * sr) / 100)));
  CHECK_THROWS_AS(stderr_sharpe_mertens(1.0, 5.0, 3.0, 100), Error);
  try {
    stderr_sharpe_mertens(1.0, 5.0, 3.0, 100);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("square-root scaling in the sample size") {
  // (T - 2) enters the implied errors, T the others.
  CHECK(stderr_sharpe_implied(0.4, 4 * 98 + 2) * 2 == doctest::Approx(stderr_sharpe_implied(0.4, 100)).epsilon(1e-12));
  CHECK(stderr_skew_implied(0.4, 4 * 98 + 2) * 2 == doctest::Approx(stderr_skew_implied(0.4, 100)).epsilon(1e-12));
  CHECK(stderr_kurt_implied(0.4, 4 * 98 + 2) * 2 == doctest::Approx(stderr_kurt_implied(0.4, 100)).epsilon(1e-12));
  CHECK(stderr_sharpe_lo(0.3, 400) * 2 == doctest::Approx(stderr_sharpe_lo(0.3, 100)).epsilon(1e-12));
  CHECK(stderr_sharpe_mertens(0.3, 1.2, 8.0, 400) * 2 == doctest::Approx(stderr_sharpe_mertens(0.3, 1.2, 8.0, 100)).epsilon(1e-12));
}

TEST_CASE("implied versus Lo and Mertens on grids") {
  for (long t : {252L, 1000L, 5000L}) {
    for (int i = 500; i < 1000; ++i) {
      for (double r : {i * 1e-3, -i * 1e-3}) {
        const double sr = dimensionless_stats(r).sharpe;
        CHECK(stderr_sharpe_implied(r, t) <= stderr_sharpe_lo(sr, t));
      }
    }
  }
  for (int i = -100; i <= 100; ++i) {
    const double r = i * 1e-2;
    const auto d = dimensionless_stats(r);
    CHECK(stderr_sharpe_mertens(d.sharpe, d.skewness, d.kurtosis, 252) <= stderr_sharpe_lo(d.sharpe, 252) + 1e-15);
  }
}

TEST_CASE("Gaussian baselines") {
  auto b = stderr_gaussian_baseline(30);
  CHECK(b.skew == doctest::Approx(0.405244215134890303).epsilon(1e-14));
  CHECK(stderr_gaussian_baseline(7).kurt == doctest::Approx(0.661437827766147648).epsilon(1e-14));
  CHECK_THROWS_AS(stderr_gaussian_baseline(3), Error);
  CHECK_THROWS_AS(stderr_sharpe_implied(0.1, 2), Error);
  CHECK_THROWS_AS(stderr_sharpe_implied(1.1, 100), Error);
}

TEST_CASE("sample-correlation density, frozen hypergeometric values") {
  CHECK(pearson_sample_density(0.5, 0.3, 10) == doctest::Approx(0.90098210282442323907).epsilon(1e-9));
  CHECK(pearson_sample_density(0.9, 0.95, 50) == doctest::Approx(1.5504420779603735115).epsilon(1e-9));
  CHECK(pearson_sample_density(-0.2, 0.1, 252) == doctest::Approx(0.000075666264285472874181).epsilon(1e-8));
  CHECK(pearson_sample_density(0.3, 0.25, 1000) == doctest::Approx(3.095434328291593473).epsilon(1e-9));
  CHECK(log_pearson_sample_density(0.3, 0.25, 1000) == doctest::Approx(std::log(3.095434328291593473)).epsilon(1e-10));
}

TEST_CASE("null density is a scaled beta law and integrates to one") {
  for (long t : {5L, 12L, 100L}) {
    for (double r : {-0.8, -0.1, 0.0, 0.4}) CHECK(pearson_sample_density(0.0, r, t) == doctest::Approx(oracle::pearson_density_rho0(r, t)).epsilon(1e-9));
  }
  for (double rho : {0.0, 0.6, -0.95}) {
    const long t = 40;
    const int n = 4000;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const double r = -1 + (i + 0.5) * 2.0 / n;
      s += pearson_sample_density(rho, r, t) * 2.0 / n;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(pearson_sample_density(1.0, 0.2, 10), Error);
}

TEST_CASE("quantiles agree with simulated sample correlations") {
  const double rho = 0.4;
  const long t = 30;
  std::vector<double> probs{0.05, 0.5, 0.95};
  auto q = pearson_sample_quantiles(rho, t, probs);
  REQUIRE(q.size() == 3);
  CHECK(q[0] < q[1]);
  CHECK(q[1] < q[2]);
  oracle::PairSource src(rho, 17);
  const int reps = 20000;
  int below[3] = {0, 0, 0};
  for (int i = 0; i < reps; ++i) {
    std::vector<double> x(t), y(t);
    for (long j = 0; j < t; ++j) std::tie(x[j], y[j]) = src();
    const double r = oracle::sample_corr(x, y);
    for (int k = 0; k < 3; ++k) below[k] += r <= q[k];
  }
  for (int k = 0; k < 3; ++k) {
    const double p = probs[k];
    CHECK(std::abs(double(below[k]) / reps - p) < 4 * std::sqrt(p * (1 - p) / reps));
  }
}

TEST_CASE("exact intervals") {
  auto [lo, hi] = exact_rho_interval(0.3, 100, 0.95);
  CHECK(lo < 0.3);
  CHECK(hi > 0.3);
  CHECK(lo >= -1.0);
  CHECK(hi <= 1.0);
  // Basic pivot: reflect the rho_hat quantiles taken at rho = rho_hat.
  auto q = pearson_sample_quantiles(0.3, 100, {0.025, 0.975});
  CHECK(lo == doctest::Approx(0.6 - q[1]).epsilon(1e-9));
  CHECK(hi == doctest::Approx(0.6 - q[0]).epsilon(1e-9));
  auto [slo, shi] = exact_sharpe_interval(0.3, 100, 0.95);
  CHECK(slo == doctest::Approx(lo / std::sqrt(1 + lo * lo)));
  CHECK(shi == doctest::Approx(hi / std::sqrt(1 + hi * hi)));
  auto [wlo, whi] = exact_rho_interval(0.3, 100, 0.99);
  CHECK(wlo < lo);
  CHECK(whi > hi);
}

TEST_CASE("reports") {
  auto s = sharpe_stderr_report(0.3, 0.28, 1.6, 10.8, 500);
  CHECK(s.statistic == "sharpe");
  CHECK(s.estimate == doctest::Approx(dimensionless_stats(0.3).sharpe));
  CHECK(s.stderr_lo > 0);
  CHECK(s.stderr_mertens > 0);
  CHECK(s.stderr_gaussian == -1);
  CHECK(s.confidence_intervals.size() == 9);
  bool saw_exact = false;
  for (auto& ci : s.confidence_intervals) {
    CHECK(ci.lo < ci.hi);
    saw_exact |= ci.method == "implied_exact";
  }
  CHECK(saw_exact);
  auto k = kurtosis_stderr_report(0.3, 500);
  CHECK(k.stderr_gaussian > 0);
  CHECK(k.stderr_lo == -1);
  CHECK(normal_critical_value(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-13));
}
