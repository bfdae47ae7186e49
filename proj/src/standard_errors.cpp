#include "dynstrat/standard_errors.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dynstrat/analytics.hpp"
#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

void check_t(long t, long min) {
  require(t >= min, ErrorKind::sample_size, "sample size must be at least " + std::to_string(min));
}

void check_rho_hat(double r) {
  require(std::isfinite(r) && std::abs(r) <= 1.0, ErrorKind::domain, "sample correlation must lie in [-1, 1]");
}

double rho_stderr(double rho_hat, long t) {
  return std::sqrt(std::max(0.0, 1.0 - rho_hat * rho_hat) / static_cast<double>(t - 2));
}

double sr_of_rho(double r) { return r / std::sqrt(1.0 + r * r); }

void check_level(double level) {
  require(level > 0.0 && level < 1.0, ErrorKind::validation, "confidence level must lie in (0, 1)");
}

}  // namespace

double stderr_sharpe_implied(double rho_hat, long t) {
  check_rho_hat(rho_hat);
  check_t(t, 3);
  const double v = 1.0 + rho_hat * rho_hat;
  return rho_stderr(rho_hat, t) / (v * std::sqrt(v));
}

double stderr_sharpe_implied_sr(double sr_hat, long t) {
  check_t(t, 3);
  const double s2 = sr_hat * sr_hat;
  require(std::isfinite(sr_hat) && s2 < 0.5, ErrorKind::domain, "SR-form stderr needs |SR| < sqrt(2)/2");
  return (1.0 - s2) * std::sqrt((1.0 - 2.0 * s2) / static_cast<double>(t - 2));
}

double stderr_sharpe_lo(double sr_hat, long t) {
  check_t(t, 1);
  return std::sqrt((1.0 + 0.5 * sr_hat * sr_hat) / static_cast<double>(t));
}

double stderr_sharpe_mertens(double sr_hat, double skewness, double kurtosis, long t) {
  check_t(t, 1);
  const double s = sr_hat;
  const double radicand = 1.0 + 0.5 * s * s - skewness * s + 0.25 * (kurtosis - 3.0) * s * s;
  if (!(radicand >= 0.0)) {
    std::ostringstream os;
    os << "Mertens radicand is negative (" << radicand << ") for sr=" << sr_hat << ", skewness=" << skewness
       << ", kurtosis=" << kurtosis;
    fail(ErrorKind::domain, os.str());
  }
  return std::sqrt(radicand / static_cast<double>(t));
}

double stderr_skew_implied(double rho_hat, long t) {
  check_rho_hat(rho_hat);
  check_t(t, 3);
  const double r2 = rho_hat * rho_hat;
  return std::abs(6.0 * (1.0 - r2) / std::pow(1.0 + r2, 2.5)) * rho_stderr(rho_hat, t);
}

double stderr_kurt_implied(double rho_hat, long t) {
  check_rho_hat(rho_hat);
  check_t(t, 3);
  const double r2 = rho_hat * rho_hat;
  return std::abs(48.0 * rho_hat * (1.0 - r2) / std::pow(1.0 + r2, 3.0)) * rho_stderr(rho_hat, t);
}

GaussianBaseline stderr_gaussian_baseline(long t) {
  check_t(t, 4);
  const double n = static_cast<double>(t);
  return {std::sqrt(6.0 * (n - 2.0) / ((n + 1.0) * (n + 3.0))),
          std::sqrt(24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0)))};
}

double log_pearson_sample_density(double rho, double rho_hat, long t) {
  require(std::isfinite(rho) && std::abs(rho) < 1.0, ErrorKind::domain, "true correlation must lie in (-1, 1)");
  require(std::isfinite(rho_hat) && std::abs(rho_hat) < 1.0, ErrorKind::domain, "sample correlation must lie in (-1, 1)");
  check_t(t, 4);
  const double n = static_cast<double>(t - 1);
  const double one_minus_x = 1.0 - rho * rho_hat;
  // cosh w - x = (1 - x)(1 + 2 sinh^2(w/2) / (1 - x)); the (1 - x)^-n factor is pulled out.
  auto integrand = [&](double w) {
    const double sh = std::sinh(0.5 * w);
    return std::exp(-n * std::log1p(2.0 * sh * sh / one_minus_x));
  };
  const double upper = 2.0 * std::asinh(std::sqrt(0.5 * one_minus_x * std::expm1(32.24 / n)));
  double err = 0.0;
  const double j = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 15, 1e-10, &err);
  if (!(j > 0.0) || err > 1e-10 * j + 1e-300) {
    std::ostringstream os;
    os << "sample-correlation density quadrature did not converge (rho=" << rho << ", rho_hat=" << rho_hat << ", T=" << t
       << ", estimate=" << j << ", error=" << err << ")";
    fail(ErrorKind::numeric, os.str());
  }
  return std::log(static_cast<double>(t - 2)) + 0.5 * n * std::log1p(-rho * rho) +
         0.5 * static_cast<double>(t - 4) * std::log1p(-rho_hat * rho_hat) - std::log(std::numbers::pi) -
         n * std::log(one_minus_x) + std::log(j);
}

double pearson_sample_density(double rho, double rho_hat, long t) {
  return std::exp(log_pearson_sample_density(rho, rho_hat, t));
}

std::vector<double> pearson_sample_quantiles(double rho, long t, const std::vector<double>& probs) {
  require(std::isfinite(rho) && std::abs(rho) < 1.0, ErrorKind::domain, "true correlation must lie in (-1, 1)");
  check_t(t, 4);
  for (double p : probs) require(p > 0.0 && p < 1.0, ErrorKind::validation, "quantile probabilities must lie in (0, 1)");
  const double sd = (1.0 - rho * rho) / std::sqrt(static_cast<double>(t - 1));
  const double lo = std::max(-1.0 + 1e-12, rho - 8.0 * sd), hi = std::min(1.0 - 1e-12, rho + 8.0 * sd);
  constexpr int kIntervals = 400;
  const double h = (hi - lo) / kIntervals;
  std::vector<double> x(kIntervals + 1), f(kIntervals + 1), cdf(kIntervals + 1, 0.0);
  for (int i = 0; i <= kIntervals; ++i) {
    x[i] = lo + h * i;
    f[i] = pearson_sample_density(rho, x[i], t);
  }
  // Cumulative Simpson on panel pairs, trapezoid refinement for the odd nodes.
  for (int i = 1; i <= kIntervals; ++i) {
    if (i % 2 == 0)
      cdf[i] = cdf[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    else
      cdf[i] = cdf[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[std::min(i + 1, kIntervals)]);
  }
  const double total = cdf[kIntervals];
  require(total > 0.0 && std::isfinite(total), ErrorKind::numeric, "sample-correlation density table is empty");
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) {
    const double target = p * total;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, kIntervals);
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
    out.push_back(x[i - 1] + frac * h);
  }
  return out;
}

std::pair<double, double> exact_rho_interval(double rho_hat, long t, double level) {
  check_level(level);
  const double a = 0.5 * (1.0 - level);
  const auto q = pearson_sample_quantiles(rho_hat, t, {a, 1.0 - a});
  return {std::max(-1.0, 2.0 * rho_hat - q[1]), std::min(1.0, 2.0 * rho_hat - q[0])};
}

std::pair<double, double> exact_sharpe_interval(double rho_hat, long t, double level) {
  const auto [lo, hi] = exact_rho_interval(rho_hat, t, level);
  return {sr_of_rho(lo), sr_of_rho(hi)};
}

double normal_critical_value(double level) {
  check_level(level);
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

StderrReport sharpe_stderr_report(double rho_hat, double sr_hat, double skewness, double kurtosis, long t,
                                  const std::vector<double>& levels) {
  StderrReport r;
  r.statistic = "sharpe";
  r.estimate = sr_of_rho(rho_hat);
  r.stderr_implied = stderr_sharpe_implied(rho_hat, t);
  r.stderr_lo = stderr_sharpe_lo(sr_hat, t);
  r.stderr_mertens = stderr_sharpe_mertens(sr_hat, skewness, kurtosis, t);
  r.sample_size = t;
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  const bool exact = std::abs(rho_hat) < 1.0 && t >= 4;
  for (double lv : sorted) {
    if (exact) {
      const auto [lo, hi] = exact_sharpe_interval(rho_hat, t, lv);
      r.confidence_intervals.push_back({"implied_exact", lv, lo, hi});
    }
    const double z = normal_critical_value(lv);
    r.confidence_intervals.push_back({"lo", lv, sr_hat - z * r.stderr_lo, sr_hat + z * r.stderr_lo});
    r.confidence_intervals.push_back({"mertens", lv, sr_hat - z * r.stderr_mertens, sr_hat + z * r.stderr_mertens});
  }
  return r;
}

namespace {

StderrReport moment_report(const char* name, double estimate, double implied, double gaussian, long t,
                           const std::vector<double>& levels) {
  StderrReport r;
  r.statistic = name;
  r.estimate = estimate;
  r.stderr_implied = implied;
  r.stderr_gaussian = gaussian;
  r.sample_size = t;
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  for (double lv : sorted) {
    const double z = normal_critical_value(lv);
    r.confidence_intervals.push_back({"implied", lv, estimate - z * implied, estimate + z * implied});
    r.confidence_intervals.push_back({"gaussian", lv, estimate - z * gaussian, estimate + z * gaussian});
  }
  return r;
}

}  // namespace

StderrReport skewness_stderr_report(double rho_hat, long t, const std::vector<double>& levels) {
  return moment_report("skewness", dimensionless_stats(rho_hat).skewness, stderr_skew_implied(rho_hat, t),
                       stderr_gaussian_baseline(t).skew, t, levels);
}

StderrReport kurtosis_stderr_report(double rho_hat, long t, const std::vector<double>& levels) {
  return moment_report("kurtosis", dimensionless_stats(rho_hat).kurtosis, stderr_kurt_implied(rho_hat, t),
                       stderr_gaussian_baseline(t).kurt, t, levels);
}

}  // namespace dynstrat
