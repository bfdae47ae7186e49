#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynstrat/errors.hpp"
#include "dynstrat/process.hpp"
#include "oracles.hpp"

using namespace dynstrat;

TEST_CASE("closed-form autocorrelations") {
  auto ar = ReturnProcess::ar(1.0, {0.5});
  for (int k = 0; k < 10; ++k) CHECK(ar.acf(k) == doctest::Approx(std::pow(0.5, k)).epsilon(1e-14));
  CHECK(ar.acf(-3) == ar.acf(3));

  auto ma = ReturnProcess::ma(1.0, {0.4});
  CHECK(ma.acf(1) == doctest::Approx(0.4 / 1.16).epsilon(1e-14));
  CHECK(ma.acf(2) == 0.0);

  auto arma = ReturnProcess::arma(1.0, {0.5}, {0.3});
  CHECK(arma.acf(1) == doctest::Approx(0.6618705035971222).epsilon(1e-13));
  CHECK(arma.acf(2) == doctest::Approx(0.5 * 0.6618705035971222).epsilon(1e-13));
  // gamma0 = (1 + 2 phi theta + theta^2) / (1 - phi^2)
  CHECK(arma.innovation_gain() == doctest::Approx((1 + 0.3 + 0.09) / 0.75).epsilon(1e-13));
  CHECK(ReturnProcess::white_noise(2.0).acf(1) == 0.0);
}

TEST_CASE("AR(2) satisfies Yule-Walker") {
  auto p = ReturnProcess::ar(1.0, {0.6, -0.3});
  const double r1 = 0.6 / 1.3;
  CHECK(p.acf(1) == doctest::Approx(r1).epsilon(1e-13));
  for (int k = 2; k < 20; ++k) CHECK(p.acf(k) == doctest::Approx(0.6 * p.acf(k - 1) - 0.3 * p.acf(k - 2)).scale(1.0).epsilon(1e-13));
}

TEST_CASE("non-stationary AR is rejected") {
  CHECK_THROWS_AS(ReturnProcess::ar(1.0, {1.0}), Error);
  CHECK_THROWS_AS(ReturnProcess::ar(1.0, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(ReturnProcess::white_noise(0.0), Error);
  CHECK(ar_stationary(std::vector<double>{0.99}));
  CHECK_FALSE(ma_invertible(std::vector<double>{-1.2}));
  CHECK(ma_invertible(std::vector<double>{0.3}));
}

TEST_CASE("Toeplitz matrix and Wold weights") {
  auto p = ReturnProcess::arma(1.0, {0.5}, {0.3});
  auto c = acf_toeplitz(p, 4);
  CHECK(c(0, 0) == 1.0);
  CHECK(c(3, 1) == doctest::Approx(p.acf(2)));
  auto psi = p.wold_coefficients(4);
  CHECK(psi[0] == 1.0);
  CHECK(psi[1] == doctest::Approx(0.8));
  CHECK(psi[2] == doctest::Approx(0.4));
  CHECK(psi[3] == doctest::Approx(0.2));
}

TEST_CASE("simulated path has the model variance and ACF") {
  auto p = ReturnProcess::arma(0.02, {0.5}, {0.3});
  auto x = simulate_returns(p, 200000, 11);
  double ss = 0;
  for (double v : x) ss += v * v;
  // Long-run variance inflates the standard error of the sample moments.
  CHECK(ss / x.size() == doctest::Approx(0.0004).epsilon(0.03));
  CHECK(std::abs(oracle::sample_acf(x, 1) - p.acf(1)) < 0.02);
  CHECK(std::abs(oracle::sample_acf(x, 3) - p.acf(3)) < 0.02);
  CHECK(burn_in_length(p) >= 1000);

  auto again = simulate_returns(p, 100, 11);
  for (std::size_t i = 0; i < 100; ++i) CHECK(again[i] == x[i]);
  auto other = simulate_returns(p, 100, 11, 1);
  CHECK(other[0] != x[0]);
}

TEST_CASE("non-Gaussian innovations are standardized") {
  Rng r(3);
  for (Innovation law : {Innovation::uniform, Innovation::centered_exponential}) {
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double v = draw_innovation(r, law);
      s += v;
      s2 += v * v;
    }
    CHECK(std::abs(s / n) < 0.015);
    CHECK(std::abs(s2 / n - 1) < 0.03);
  }
}

TEST_CASE("Toeplitz ACF matrices are positive semi-definite") {
  for (auto p : {ReturnProcess::ar(1.0, {0.95}), ReturnProcess::arma(1.0, {0.6, -0.3}, {0.5}), ReturnProcess::ma(1.0, {-0.9})}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(acf_toeplitz(p, 40));
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("empirical ACF over lags 0..5 at length 1e6") {
  auto p = ReturnProcess::arma(1.0, {0.6, -0.3}, {0.5});
  const std::size_t n = 1000000;
  auto x = simulate_returns(p, n, 123);
  for (std::size_t k = 0; k <= 5; ++k) CHECK(std::abs(oracle::sample_acf(x, k) - p.acf(static_cast<long>(k))) < 4.0 / std::sqrt(double(n)));
}
