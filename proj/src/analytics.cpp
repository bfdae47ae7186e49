#include "dynstrat/analytics.hpp"

#include <cmath>
#include <vector>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

void check_rho(double rho) {
  require(std::isfinite(rho) && std::abs(rho) <= 1.0, ErrorKind::validation, "correlation must lie in [-1, 1]");
}

}  // namespace

StrategyStats product_moments(const JointGaussianSpec& s) {
  check_rho(s.rho);
  require(s.sigma_r > 0.0 && s.sigma_x > 0.0, ErrorKind::validation, "volatilities must be positive");
  require(s.mu_r == 0.0 && s.mu_x == 0.0, ErrorKind::validation,
          "product_moments takes zero means; use nonzero_mean_stats");
  const double r = s.rho, r2 = r * r, sc = s.sigma_r * s.sigma_x;
  StrategyStats st;
  st.mu1 = sc * r;
  st.mu2 = sc * sc * (1.0 + r2);
  st.mu3 = sc * sc * sc * 2.0 * r * (3.0 + r2);
  st.mu4 = sc * sc * sc * sc * 3.0 * (3.0 + 14.0 * r2 + 3.0 * r2 * r2);
  const ShapeStats d = dimensionless_stats(r);
  st.sharpe = d.sharpe;
  st.skewness = d.skewness;
  st.kurtosis = d.kurtosis;
  return st;
}

ShapeStats dimensionless_stats(double rho) {
  check_rho(rho);
  const double r2 = rho * rho, v = 1.0 + r2;
  return {rho / std::sqrt(v), 2.0 * rho * (3.0 + r2) / (v * std::sqrt(v)), 3.0 * (3.0 + 14.0 * r2 + 3.0 * r2 * r2) / (v * v)};
}

double annualize_sharpe(double sr, double periods_per_year) {
  require(periods_per_year > 0.0, ErrorKind::validation, "periods per year must be positive");
  return sr * std::sqrt(periods_per_year);
}

ShapeStats nonzero_mean_stats(double sr_r, double sr_x, double rho) {
  check_rho(rho);
  const double a = sr_x, b = sr_r, r2 = rho * rho;
  const double var = a * a + b * b + 2.0 * rho * a * b + r2 + 1.0;
  const double m3 = 2.0 * rho * (r2 + 3.0 + 3.0 * a * a + 3.0 * b * b) + 6.0 * a * b * (1.0 + r2);
  return {(a * b + rho) / std::sqrt(var), m3 / (var * std::sqrt(var)), 0.0};
}

MultiAssetStats multi_asset_stats(int n, double rho) {
  require(n >= 1, ErrorKind::validation, "asset count must be at least 1");
  check_rho(rho);
  const double r2 = rho * rho, dn = n;
  const ShapeStats one = dimensionless_stats(rho);
  MultiAssetStats m;
  m.mean = dn * rho;
  m.variance = dn * (r2 + 1.0);
  m.third_central = 2.0 * dn * rho * (r2 + 3.0);
  m.sharpe = std::sqrt(dn) * one.sharpe;
  m.skewness = one.skewness / std::sqrt(dn);
  return m;
}

double mgf_moments_oracle(int n, double rho, int order) {
  require(n >= 1, ErrorKind::validation, "asset count must be at least 1");
  check_rho(rho);
  require(order >= 1 && order <= 12, ErrorKind::validation, "moment order must lie in 1..12");
  // f(t) = 1 - 2 rho t - (1 - rho^2) t^2, g = f^alpha with alpha = -n/2.
  // Power-series recursion: m f0 g_m = sum_{k=1..m} ((alpha + 1) k - m) f_k g_{m-k}.
  const double f[3] = {1.0, -2.0 * rho, -(1.0 - rho * rho)};
  const double alpha = -0.5 * n;
  std::vector<double> g(static_cast<std::size_t>(order) + 1, 0.0);
  g[0] = 1.0;
  for (int m = 1; m <= order; ++m) {
    double s = 0.0;
    for (int k = 1; k <= std::min(m, 2); ++k) s += ((alpha + 1.0) * k - m) * f[k] * g[static_cast<std::size_t>(m - k)];
    g[static_cast<std::size_t>(m)] = s / (m * f[0]);
  }
  double fact = 1.0;
  for (int m = 2; m <= order; ++m) fact *= m;
  return fact * g[static_cast<std::size_t>(order)];
}

std::array<double, 4> mgf_central_moments(int n, double rho) {
  const double m1 = mgf_moments_oracle(n, rho, 1), m2 = mgf_moments_oracle(n, rho, 2);
  const double m3 = mgf_moments_oracle(n, rho, 3), m4 = mgf_moments_oracle(n, rho, 4);
  const double c2 = m2 - m1 * m1;
  const double c3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
  const double c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  return {m1, c2, c3, c4};
}

QuadraticFormMoments quadratic_form_moments(const Eigen::MatrixXd& a, const Eigen::MatrixXd& v) {
  require(a.rows() == a.cols() && v.rows() == v.cols() && a.rows() == v.rows() && a.rows() > 0, ErrorKind::validation,
          "quadratic form needs square matrices of equal dimension");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorKind::validation, "A must be symmetric");
  require((v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff()),
          ErrorKind::validation, "V must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  require(llt.info() == Eigen::Success, ErrorKind::validation, "V must be positive definite");

  const Eigen::MatrixXd av = a * v;
  const Eigen::MatrixXd av2 = av * av;
  const double t1 = av.trace(), t2 = av2.trace(), t3 = (av2 * av).trace(), t4 = (av2 * av2).trace();
  require(t2 > 0.0, ErrorKind::degenerate, "quadratic form has zero variance");
  QuadraticFormMoments q;
  q.mean = t1;
  q.variance = 2.0 * t2;
  q.skewness = 2.0 * std::sqrt(2.0) * t3 / std::pow(t2, 1.5);
  q.excess_kurtosis = 12.0 * t4 / (t2 * t2);
  q.kurtosis = 3.0 + q.excess_kurtosis;
  return q;
}

double multiperiod_variance_factor(const ConvolutionFilter& filter, const ReturnProcess& process, int horizon) {
  require(horizon >= 1, ErrorKind::validation, "horizon must be at least 1");
  const double rho = signal_return_correlation(filter, process);
  double sum = 0.0;
  for (int k = 1; k < horizon; ++k) {
    const double w = static_cast<double>(horizon - k) / horizon;
    sum += w * (process.acf(k) * signal_acf(filter, process, k) +
                cross_correlation(filter, process, k) * cross_correlation(filter, process, -k));
  }
  return 1.0 + rho * rho + 2.0 * sum;
}

double multiperiod_sharpe(const ConvolutionFilter& filter, const ReturnProcess& process, int horizon) {
  const double rho = signal_return_correlation(filter, process);
  const double v = multiperiod_variance_factor(filter, process, horizon);
  require(v > 0.0, ErrorKind::numeric, "multi-period variance is not positive");
  return rho * std::sqrt(static_cast<double>(horizon)) / std::sqrt(v);
}

double jb_floor(long n, long k) {
  require(n > k && k >= 0, ErrorKind::validation, "Jarque-Bera needs n > k >= 0");
  return 1.5 * static_cast<double>(n - k + 1);
}

double jarque_bera(long n, long k, double skewness, double kurtosis) {
  require(n > k && k >= 0, ErrorKind::validation, "Jarque-Bera needs n > k >= 0");
  const double ex = kurtosis - 3.0;
  return static_cast<double>(n - k + 1) / 6.0 * (skewness * skewness + ex * ex / 4.0);
}

}  // namespace dynstrat
