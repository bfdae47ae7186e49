#include "dynstrat/density.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double k0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, harmonic = 0.0, i0 = 1.0, tail = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += term * harmonic;
    if (term * harmonic < 1e-18 * tail) break;
  }
  return -(std::log(0.5 * z) + kEulerGamma) * i0 + tail;
}

// Steed's continued fraction (Temme's form) for e^z K0(z).
double k0_scaled_cf(double z) {
  double b = 2.0 * (1.0 + z), d = 1.0 / b, h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-16) return std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  }
  fail(ErrorKind::numeric, "K0 continued fraction did not converge");
}

double k0_scaled_asymptotic(double z) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (-(2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * sum;
}

void check_dist(const ProductDensity& d) {
  require(d.sigma_r > 0.0 && d.sigma_x > 0.0 && std::isfinite(d.sigma_r) && std::isfinite(d.sigma_x),
          ErrorKind::validation, "volatilities must be positive");
  require(std::isfinite(d.rho) && std::abs(d.rho) <= 1.0, ErrorKind::validation, "correlation must lie in [-1, 1]");
  require(!d.degenerate(), ErrorKind::domain,
          "|rho| = 1 gives the degenerate chi-square(1) limit; the product density is not evaluated there");
}

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

// Sum of adaptive Gauss-Kronrod over unit-width panels of [lo, hi].
template <class F>
double panel_integral(F f, double lo, double hi, double width, const char* what) {
  double total = 0.0, err_total = 0.0;
  for (double a = lo; a < hi; a += width) {
    const double b = std::min(hi, a + width);
    double err = 0.0;
    total += GK::integrate(f, a, b, 15, 1e-13, &err);
    err_total += err;
  }
  if (!std::isfinite(total) || err_total > 1e-9 * std::max(1.0, std::abs(total))) {
    std::ostringstream os;
    os << what << " quadrature did not converge (estimate=" << total << ", error=" << err_total << ")";
    fail(ErrorKind::numeric, os.str());
  }
  return total;
}

}  // namespace

double bessel_k0(double z) {
  require(std::isfinite(z) && z > 0.0, ErrorKind::domain, "K0 needs a positive argument");
  if (z <= 2.0) return k0_series(z);
  return std::exp(-z) * bessel_k0_scaled(z);
}

double bessel_k0_scaled(double z) {
  require(std::isfinite(z) && z > 0.0, ErrorKind::domain, "K0 needs a positive argument");
  if (z <= 2.0) return std::exp(z) * k0_series(z);
  if (z <= 30.0) return k0_scaled_cf(z);
  return k0_scaled_asymptotic(z);
}

bool ProductDensity::degenerate() const { return std::abs(rho) >= 1.0; }

ProductDensity ProductDensity::unit_variance(double rho) {
  // Var(XR) = sigma^4 (1 + rho^2) with sigma_r = sigma_x = sigma.
  const double s = std::pow(1.0 + rho * rho, -0.25);
  return {s, s, rho};
}

double log_product_pdf(double s, const ProductDensity& d) {
  check_dist(d);
  require(std::isfinite(s), ErrorKind::domain, "product density needs a finite argument");
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  const double sc = d.sigma_r * d.sigma_x, den = sc * (1.0 - d.rho * d.rho);
  const double z = std::abs(s) / den;
  return -std::log(std::numbers::pi * sc) - 0.5 * std::log1p(-d.rho * d.rho) + (d.rho * s - std::abs(s)) / den +
         std::log(bessel_k0_scaled(z));
}

double product_pdf(double s, const ProductDensity& d) { return std::exp(log_product_pdf(s, d)); }

JointPdf bivariate_gaussian_pdf(const ProductDensity& d) {
  check_dist(d);
  const double one_m = 1.0 - d.rho * d.rho;
  const double norm = 1.0 / (2.0 * std::numbers::pi * d.sigma_x * d.sigma_r * std::sqrt(one_m));
  return [=](double x, double y) {
    const double u = x / d.sigma_x, v = y / d.sigma_r;
    return norm * std::exp(-(u * u - 2.0 * d.rho * u * v + v * v) / (2.0 * one_m));
  };
}

double product_pdf_numeric(double s, const JointPdf& joint_pdf) {
  require(std::isfinite(s), ErrorKind::domain, "product density needs a finite argument");
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  // x = +-e^u, dx / |x| = du.
  auto f = [&](double u) {
    const double x = std::exp(u), y = s / x;
    return joint_pdf(x, y) + joint_pdf(-x, -y);
  };
  const double c = 0.5 * std::log(std::abs(s));
  return panel_integral(f, c - 45.0, c + 45.0, 1.0, "product density");
}

double product_pdf_moment(const ProductDensity& d, int order) {
  check_dist(d);
  require(order >= 0 && order <= 8, ErrorKind::validation, "moment order must lie in 0..8");
  const double sc = d.sigma_r * d.sigma_x;
  // s = +-e^u, ds = e^u du; the log singularity at 0 becomes an exponentially small tail.
  // p(s) +- p(-s) = 2 C K0(z) cosh|sinh(rho s / den); sinh through expm1 so odd orders do not cancel.
  const double den = sc * (1.0 - d.rho * d.rho);
  const double log_c = -std::log(std::numbers::pi * sc) - 0.5 * std::log1p(-d.rho * d.rho);
  const bool odd = order % 2;
  auto f = [&](double u) {
    const double s = std::exp(u), z = s / den, a = d.rho * z;
    const double base = std::exp(log_c + std::abs(a) - z) * bessel_k0_scaled(z);
    const double e2 = -std::expm1(-2.0 * std::abs(a));
    const double sym = odd ? std::copysign(e2, a) : 2.0 - e2;
    return std::pow(s, order + 1) * base * sym;
  };
  const double slowest = sc * (1.0 + std::abs(d.rho));
  const double hi = std::log(slowest * (60.0 + 12.0 * order));
  return panel_integral(f, std::log(sc) - 45.0, hi, 1.0, "product moment");
}

TailExponents tail_exponents(const ProductDensity& d) {
  check_dist(d);
  const double sc = d.sigma_r * d.sigma_x;
  auto fit = [&](double sign) {
    // Least-squares slope of log p against |s| on [10, 30].
    constexpr int n = 41;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double a = 10.0 + 20.0 * i / (n - 1);
      const double y = log_product_pdf(sign * a, d);
      sx += a;
      sy += y;
      sxx += a * a;
      sxy += a * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  TailExponents t;
  t.right_tail_rate = fit(1.0);
  t.left_tail_rate = fit(-1.0);
  t.right_tail_theory = 1.0 / (sc * (1.0 + d.rho));
  t.left_tail_theory = 1.0 / (sc * (1.0 - d.rho));
  double m = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double s = std::pow(10.0, -8.0 + 4.0 * i / 40.0);
    m = std::max({m, product_pdf(s, d) / -std::log(s), product_pdf(-s, d) / -std::log(s)});
  }
  t.origin_log_ratio_max = m;
  return t;
}

}  // namespace dynstrat
