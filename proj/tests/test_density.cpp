#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dynstrat/analytics.hpp"
#include "dynstrat/density.hpp"
#include "dynstrat/errors.hpp"
#include "oracles.hpp"

using namespace dynstrat;

TEST_CASE("K0 frozen values") {
  CHECK(bessel_k0(1.0) == doctest::Approx(0.421024438240708333).epsilon(1e-15));
  CHECK(bessel_k0(10.0) == doctest::Approx(1.77800623161676518e-5).epsilon(1e-14));
  CHECK(bessel_k0_scaled(10.0) == doctest::Approx(1.77800623161676518e-5 * std::exp(10.0)).epsilon(1e-14));
}

TEST_CASE("K0 against Boost and the integral representation") {
  for (double z = 1e-6; z < 700; z *= 1.37) {
    CAPTURE(z);
    CHECK(bessel_k0(z) == doctest::Approx(oracle::k0_boost(z)).epsilon(2e-14));
    if (z < 200) CHECK(bessel_k0(z) == doctest::Approx(oracle::k0_quadrature(z)).epsilon(1e-12));
  }
  // Region boundaries.
  for (double z : {2.0, std::nextafter(2.0, 3.0), 30.0, std::nextafter(30.0, 31.0)})
    CHECK(bessel_k0(z) == doctest::Approx(oracle::k0_boost(z)).epsilon(2e-14));
  CHECK(std::isfinite(bessel_k0_scaled(1e5)));
  CHECK(bessel_k0_scaled(1e5) == doctest::Approx(std::sqrt(std::numbers::pi / 2e5)).epsilon(2e-6));
  CHECK_THROWS_AS(bessel_k0(0.0), Error);
}

TEST_CASE("closed-form density vs the integral of the joint law") {
  for (double rho : {-0.7, 0.0, 0.25, 0.9}) {
    ProductDensity d{1.3, 0.6, rho};
    auto joint = bivariate_gaussian_pdf(d);
    for (double s : {-3.0, -0.5, -1e-3, 1e-4, 0.2, 1.0, 4.0}) {
      CAPTURE(rho);
      CAPTURE(s);
      CHECK(product_pdf(s, d) == doctest::Approx(product_pdf_numeric(s, joint)).epsilon(1e-9));
    }
  }
  ProductDensity unit{1, 1, 0};
  CHECK(product_pdf(1.0, unit) == doctest::Approx(0.134016241016994274).epsilon(1e-14));
  CHECK(std::isinf(product_pdf(0.0, unit)));
  CHECK_THROWS_AS(product_pdf(1.0, {1, 1, 1.0}), Error);
  CHECK((ProductDensity{1, 1, -1.0}).degenerate());
}

TEST_CASE("mass and moments") {
  for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    CAPTURE(rho);
    auto d = ProductDensity::unit_variance(rho);
    CHECK(product_pdf_moment(d, 0) == doctest::Approx(1.0).epsilon(1e-9));
    const double sc = d.sigma_r * d.sigma_x;
    CHECK(product_pdf_moment(d, 1) == doctest::Approx(sc * rho).scale(1.0).epsilon(1e-9));
    CHECK(product_pdf_moment(d, 2) == doctest::Approx(sc * sc * (1 + 2 * rho * rho)).epsilon(1e-9));
    for (int k = 3; k <= 6; ++k)
      CHECK(product_pdf_moment(d, k) == doctest::Approx(std::pow(sc, k) * mgf_moments_oracle(1, rho, k)).scale(1.0).epsilon(1e-8));
  }
  // Raw second moment at rho = 0.6 in natural units.
  CHECK(product_pdf_moment({1, 1, 0.6}, 2) == doctest::Approx(1.72).epsilon(1e-9));
  auto u = ProductDensity::unit_variance(0.5);
  const double var = product_pdf_moment(u, 2) - std::pow(product_pdf_moment(u, 1), 2);
  CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tails and origin") {
  for (double rho : {0.0, 0.3, -0.5}) {
    auto t = tail_exponents({1, 1, rho});
    // log p = -rate |s| - log|s|/2 + O(1/|s|); the fitted slope carries the 1/(2|s|) term.
    CHECK(t.right_tail_rate == doctest::Approx(t.right_tail_theory).epsilon(0.05));
    CHECK(t.left_tail_rate == doctest::Approx(t.left_tail_theory).epsilon(0.05));
    CHECK(t.right_tail_rate > t.right_tail_theory);
    CHECK(t.origin_log_ratio_max < 1.0);
    CHECK(std::string(t.origin_behavior) == "logarithmic");
  }
  // p(s) ~ -log|s| / pi at the origin for unit scale.
  ProductDensity u{1, 1, 0.0};
  CHECK(product_pdf(1e-12, u) / -std::log(1e-12) == doctest::Approx(1 / std::numbers::pi).epsilon(0.02));
}

TEST_CASE("histogram of simulated products") {
  const double rho = 0.4;
  auto d = ProductDensity{1, 1, rho};
  oracle::PairSource src(rho, 23);
  const int n = 400000;
  const double lo = -3, hi = 5;
  const int bins = 40;
  std::vector<int> count(bins, 0);
  for (int i = 0; i < n; ++i) {
    auto [x, r] = src();
    const double s = x * r;
    if (s >= lo && s < hi) ++count[static_cast<int>((s - lo) / (hi - lo) * bins)];
  }
  const double w = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    // Bin probability by midpoint-refined integration of the closed form.
    double p = 0;
    const int m = 200;
    for (int j = 0; j < m; ++j) p += product_pdf(lo + b * w + (j + 0.5) * w / m, d) * w / m;
    const double sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(count[b] - n * p) < 4 * sd + 1);
  }
}
