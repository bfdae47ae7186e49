#include "dynstrat/signals.hpp"

#include <cmath>
#include <sstream>

#include "dynstrat/errors.hpp"
#include "dynstrat/kernels.hpp"

namespace dynstrat {

namespace {

constexpr std::size_t kMaxAutoLength = 100'000;

std::string fmt_num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void check_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0 && lambda < 1.0, ErrorKind::validation,
          "EWMA decay must lie in (0, 1), got " + fmt_num(lambda));
}

void validate(const ConvolutionFilter& f) {
  require(!f.coeffs.empty(), ErrorKind::validation, "filter must have at least one coefficient");
  for (double c : f.coeffs) require(std::isfinite(c), ErrorKind::validation, "filter coefficients must be finite");
}

// a(d) = sum_i phi_i phi_{i+d}, d = 0..K-1
std::vector<double> autocorrelation(const std::vector<double>& phi) {
  const std::size_t k = phi.size();
  std::vector<double> a(k);
  for (std::size_t d = 0; d < k; ++d)
    a[d] = kernels::dot(std::span(phi).subspan(0, k - d), std::span(phi).subspan(d, k - d));
  return a;
}

// E[X_t R_{t-lag}] / sigma_R^2
double cross_covariance(const ConvolutionFilter& f, const ReturnProcess& p, long lag) {
  double s = 0.0;
  for (std::size_t k = 1; k <= f.size(); ++k) s += f.coeffs[k - 1] * p.acf(static_cast<long>(k) - lag);
  return s;
}

double nonzero_quadratic_form(const ConvolutionFilter& f, const ReturnProcess& p) {
  const double q = filter_quadratic_form(f, p);
  require(q > 0.0, ErrorKind::degenerate, "signal has zero variance");
  return q;
}

}  // namespace

double ConvolutionFilter::squared_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return s;
}

const char* to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::sma: return "sma";
    case FilterKind::ewma: return "ewma";
    case FilterKind::triangular: return "triangular";
    case FilterKind::sma_difference: return "sma_diff";
    case FilterKind::ewma_difference: return "ewma_diff";
    case FilterKind::arma_forecast: return "arma_forecast";
    case FilterKind::holt_winters: return "holt_winters";
    case FilterKind::custom: return "custom";
  }
  return "?";
}

FilterKind filter_kind_from_string(const std::string& name) {
  for (auto k : {FilterKind::sma, FilterKind::ewma, FilterKind::triangular, FilterKind::sma_difference,
                 FilterKind::ewma_difference, FilterKind::arma_forecast, FilterKind::holt_winters, FilterKind::custom})
    if (name == to_string(k)) return k;
  if (name == "sma_difference") return FilterKind::sma_difference;
  if (name == "ewma_difference") return FilterKind::ewma_difference;
  if (name == "hw" || name == "holt-winters") return FilterKind::holt_winters;
  fail(ErrorKind::validation, "unknown filter kind '" + name + "'");
}

std::size_t ewma_auto_truncation(double lambda) {
  check_lambda(lambda);
  auto k = static_cast<std::size_t>(std::ceil(std::log(1e-10) / std::log(lambda)));
  if (std::pow(lambda, static_cast<double>(k)) >= 1e-10) ++k;
  return std::max<std::size_t>(k, 1);
}

ConvolutionFilter sma_filter(int window) {
  require(window >= 1, ErrorKind::validation, "SMA window must be at least 1");
  return {std::vector<double>(static_cast<std::size_t>(window), 1.0 / window), "sma(t=" + std::to_string(window) + ")"};
}

ConvolutionFilter ewma_filter(double lambda, std::optional<std::size_t> k) {
  check_lambda(lambda);
  const std::size_t len = k.value_or(ewma_auto_truncation(lambda));
  require(len >= 1, ErrorKind::validation, "EWMA truncation must be at least 1");
  // c(lambda) lambda^k with c(lambda) = (1 - lambda) / lambda, i.e. (1 - lambda) lambda^{k-1}.
  std::vector<double> c(len);
  double w = 1.0 - lambda;
  for (std::size_t i = 0; i < len; ++i, w *= lambda) c[i] = w;
  return {std::move(c), "ewma(lambda=" + fmt_num(lambda) + ",k=" + std::to_string(len) + ")"};
}

ConvolutionFilter triangular_filter(int window) {
  require(window >= 2, ErrorKind::validation, "triangular window must be at least 2");
  std::vector<double> c(static_cast<std::size_t>(window - 1));
  for (int k = 1; k < window; ++k) c[static_cast<std::size_t>(k - 1)] = static_cast<double>(window - k) / window;
  return {std::move(c), "triangular(t=" + std::to_string(window) + ")"};
}

ConvolutionFilter sma_difference_filter(int fast, int slow) {
  require(fast >= 1 && slow > fast, ErrorKind::validation, "SMA difference needs 1 <= t1 < t2");
  // SMA_T(P) = P_{t-1} - sum_j (T - j)/T R_{t-j}, so the difference is
  // triangular(slow) - triangular(fast) on returns.
  std::vector<double> c(static_cast<std::size_t>(slow - 1));
  for (int j = 1; j < slow; ++j) {
    const double slow_w = static_cast<double>(slow - j) / slow;
    const double fast_w = j < fast ? static_cast<double>(fast - j) / fast : 0.0;
    c[static_cast<std::size_t>(j - 1)] = slow_w - fast_w;
  }
  return {std::move(c), "sma_diff(t1=" + std::to_string(fast) + ",t2=" + std::to_string(slow) + ")"};
}

ConvolutionFilter ewma_difference_filter(double lambda_fast, double lambda_slow, std::optional<std::size_t> k) {
  check_lambda(lambda_fast);
  check_lambda(lambda_slow);
  require(lambda_fast != lambda_slow, ErrorKind::validation, "EWMA difference needs distinct decays");
  const std::size_t len = k.value_or(std::max(ewma_auto_truncation(lambda_fast), ewma_auto_truncation(lambda_slow)));
  const auto a = ewma_filter(lambda_fast, len), b = ewma_filter(lambda_slow, len);
  std::vector<double> c(len);
  for (std::size_t i = 0; i < len; ++i) c[i] = a.coeffs[i] - b.coeffs[i];
  return {std::move(c), "ewma_diff(lambda1=" + fmt_num(lambda_fast) + ",lambda2=" + fmt_num(lambda_slow) +
                            ",k=" + std::to_string(len) + ")"};
}

ConvolutionFilter arma_forecast_filter(std::span<const double> ar, std::span<const double> ma, std::optional<std::size_t> k) {
  for (double x : ar) require(std::isfinite(x), ErrorKind::validation, "AR coefficients must be finite");
  for (double x : ma) require(std::isfinite(x), ErrorKind::validation, "MA coefficients must be finite");
  require(!ar.empty() || !ma.empty(), ErrorKind::validation, "ARMA forecast needs at least one coefficient");
  require(ma_invertible(ma), ErrorKind::validation, "ARMA forecast needs an invertible MA polynomial");
  // pi(B) = phi(B) / theta(B) = sum c_k B^k; the one-step predictor is -sum_{k>=1} c_k R_{t-k}.
  const std::size_t p = ar.size(), q = ma.size();
  const std::size_t run = std::max<std::size_t>({p, q, 1});
  const std::size_t cap = k.value_or(kMaxAutoLength);
  std::vector<double> c{1.0};
  std::size_t quiet = 0;
  for (std::size_t n = 1; n <= cap; ++n) {
    double v = n <= p ? -ar[n - 1] : 0.0;
    for (std::size_t j = 1; j <= std::min(n, q); ++j) v -= ma[j - 1] * c[n - j];
    c.push_back(v);
    if (!k) {
      quiet = (std::abs(v) < 1e-12 && n >= p) ? quiet + 1 : 0;
      if (quiet >= run) break;
    }
  }
  std::vector<double> phi;
  for (std::size_t n = 1; n < c.size(); ++n) phi.push_back(-c[n]);
  if (!k) {
    while (phi.size() > 1 && std::abs(phi.back()) < 1e-12) phi.pop_back();
  }
  require(!phi.empty(), ErrorKind::validation, "ARMA forecast truncation must be at least 1");
  return {std::move(phi), "arma_forecast(p=" + std::to_string(p) + ",q=" + std::to_string(q) + ",k=" +
                              std::to_string(k.value_or(0)) + ")"};
}

ConvolutionFilter holt_winters_filter(double alpha, double beta, std::optional<std::size_t> k) {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, ErrorKind::validation, "Holt-Winters alpha must lie in (0, 1)");
  require(std::isfinite(beta) && beta > 0.0 && beta < 1.0, ErrorKind::validation, "Holt-Winters beta must lie in (0, 1)");
  // Impulse response of the one-step Holt forecast l_{t-1} + b_{t-1} to a unit return at t-k.
  const std::size_t cap = k.value_or(kMaxAutoLength);
  std::vector<double> h;
  double level = 0.0, slope = 0.0;
  std::size_t quiet = 0;
  for (std::size_t step = 0; step < cap; ++step) {
    const double y = step == 0 ? 1.0 : 0.0;
    const double prev = level;
    level = alpha * y + (1.0 - alpha) * (level + slope);
    slope = beta * (level - prev) + (1.0 - beta) * slope;
    h.push_back(level + slope);
    if (!k) {
      quiet = std::abs(h.back()) < 1e-12 ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  if (!k) {
    require(quiet >= 2, ErrorKind::validation, "Holt-Winters impulse response does not decay within the length cap");
    while (h.size() > 1 && std::abs(h.back()) < 1e-12) h.pop_back();
  }
  return {std::move(h), "holt_winters(alpha=" + fmt_num(alpha) + ",beta=" + fmt_num(beta) + ")"};
}

ConvolutionFilter custom_filter(std::vector<double> coeffs, std::string label) {
  ConvolutionFilter f{std::move(coeffs), std::move(label)};
  validate(f);
  return f;
}

ConvolutionFilter build_filter(const FilterSpec& s) {
  ConvolutionFilter f;
  switch (s.kind) {
    case FilterKind::sma: f = sma_filter(s.window); break;
    case FilterKind::ewma: f = ewma_filter(s.lambda, s.truncation); break;
    case FilterKind::triangular: f = triangular_filter(s.window); break;
    case FilterKind::sma_difference: f = sma_difference_filter(s.window_fast, s.window_slow); break;
    case FilterKind::ewma_difference: f = ewma_difference_filter(s.lambda_fast, s.lambda_slow, s.truncation); break;
    case FilterKind::arma_forecast: f = arma_forecast_filter(s.ar, s.ma, s.truncation); break;
    case FilterKind::holt_winters: f = holt_winters_filter(s.alpha, s.beta, s.truncation); break;
    case FilterKind::custom: f = custom_filter(s.coeffs); break;
  }
  validate(f);
  return f;
}

double filter_quadratic_form(const ConvolutionFilter& f, const ReturnProcess& p) {
  validate(f);
  const std::vector<double> a = autocorrelation(f.coeffs);
  double q = a[0];
  for (std::size_t d = 1; d < a.size(); ++d) q += 2.0 * a[d] * p.acf(static_cast<long>(d));
  return q;
}

double signal_variance(const ConvolutionFilter& f, const ReturnProcess& p) {
  return p.sigma() * p.sigma() * filter_quadratic_form(f, p);
}

double signal_return_correlation(const ConvolutionFilter& f, const ReturnProcess& p) {
  return cross_correlation(f, p, 0);
}

double cross_correlation(const ConvolutionFilter& f, const ReturnProcess& p, long lag) {
  const double q = nonzero_quadratic_form(f, p);
  return cross_covariance(f, p, lag) / std::sqrt(q);
}

double signal_acf(const ConvolutionFilter& f, const ReturnProcess& p, long lag) {
  const double q = nonzero_quadratic_form(f, p);
  const std::vector<double> a = autocorrelation(f.coeffs);
  // E[X_t X_{t-lag}] / sigma_R^2 = sum_{d=-(K-1)}^{K-1} a(|d|) acf(lag - d)
  double s = a[0] * p.acf(lag);
  for (std::size_t d = 1; d < a.size(); ++d) {
    const long dl = static_cast<long>(d);
    s += a[d] * (p.acf(lag - dl) + p.acf(lag + dl));
  }
  return s / q;
}

std::vector<double> apply_filter(const ConvolutionFilter& f, std::span<const double> returns) {
  validate(f);
  require(returns.size() > f.size(), ErrorKind::sample_size, "return series shorter than filter length + 1");
  std::vector<double> out(returns.size() - f.size());
  kernels::causal_filter(returns, f.coeffs, out);
  return out;
}

}  // namespace dynstrat
