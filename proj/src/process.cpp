#include "dynstrat/process.hpp"

#include <algorithm>
#include <cmath>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

constexpr double kAcfCutoff = 1e-14;
constexpr std::size_t kMaxAcfLags = 2'000'000;

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) require(std::isfinite(x), ErrorKind::validation, std::string(what) + " must be finite");
}

// Largest modulus of the roots of z^p - c_1 z^{p-1} - ... - c_p (companion matrix).
double max_companion_modulus(std::span<const double> c) {
  const auto p = static_cast<Eigen::Index>(c.size());
  if (p == 0) return 0.0;
  if (p == 1) return std::abs(c[0]);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) m(0, j) = c[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) m(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> psi_weights(std::span<const double> ar, std::span<const double> ma, std::size_t n) {
  std::vector<double> psi(n, 0.0);
  if (n == 0) return psi;
  psi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double v = j <= ma.size() ? ma[j - 1] : 0.0;
    for (std::size_t i = 1; i <= std::min(j, ar.size()); ++i) v += ar[i - 1] * psi[j - i];
    psi[j] = v;
  }
  return psi;
}

}  // namespace

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::white_noise: return "white_noise";
    case ProcessKind::ar: return "ar";
    case ProcessKind::ma: return "ma";
    case ProcessKind::arma: return "arma";
  }
  return "?";
}

double draw_innovation(Rng& rng, Innovation law) {
  switch (law) {
    case Innovation::gaussian: return rng.normal();
    case Innovation::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case Innovation::centered_exponential: return -std::log1p(-rng.uniform()) - 1.0;
  }
  return 0.0;
}

bool ar_stationary(std::span<const double> ar) { return max_companion_modulus(ar) < 1.0 - 1e-10; }

bool ma_invertible(std::span<const double> ma) {
  std::vector<double> neg(ma.begin(), ma.end());
  for (double& x : neg) x = -x;
  return max_companion_modulus(neg) < 1.0 - 1e-10;
}

std::vector<double> arma_autocovariance(std::span<const double> ar, std::span<const double> ma, std::size_t max_lag) {
  check_finite(ar, "AR coefficients");
  check_finite(ma, "MA coefficients");
  require(ar_stationary(ar), ErrorKind::validation, "AR polynomial has a root on or inside the unit circle");

  const std::size_t p = ar.size(), q = ma.size();
  const std::vector<double> psi = psi_weights(ar, ma, q + 1);
  auto theta = [&](std::size_t j) { return j == 0 ? 1.0 : (j <= q ? ma[j - 1] : 0.0); };
  // sum_{j=k}^{q} theta_j psi_{j-k}
  auto rhs = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t j = k; j <= q; ++j) s += theta(j) * psi[j - k];
    return s;
  };

  // gamma(k) - sum_i ar_i gamma(|k - i|) = rhs(k), k = 0..p, unknowns gamma(0..p).
  const auto n = static_cast<Eigen::Index>(p + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t k = 0; k <= p; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    a(row, row) += 1.0;
    for (std::size_t i = 1; i <= p; ++i) {
      const auto col = static_cast<Eigen::Index>(k >= i ? k - i : i - k);
      a(row, col) -= ar[i - 1];
    }
    b(row) = rhs(k);
  }
  const Eigen::VectorXd head = a.fullPivLu().solve(b);

  std::vector<double> gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= std::min(p, max_lag); ++k) gamma[k] = head(static_cast<Eigen::Index>(k));
  for (std::size_t k = p + 1; k <= max_lag; ++k) {
    double g = rhs(k);
    for (std::size_t i = 1; i <= p; ++i) g += ar[i - 1] * gamma[k - i];
    gamma[k] = g;
  }
  require(gamma[0] > 0.0 && std::isfinite(gamma[0]), ErrorKind::validation, "ARMA model has non-positive variance");
  return gamma;
}

std::vector<double> arma_acf(std::span<const double> ar, std::span<const double> ma, std::size_t max_lag) {
  std::vector<double> g = arma_autocovariance(ar, ma, max_lag);
  const double g0 = g[0];
  for (double& x : g) x /= g0;
  return g;
}

ReturnProcess::ReturnProcess(ProcessKind kind, double sigma, std::vector<double> ar, std::vector<double> ma)
    : kind_(kind), sigma_(sigma), ar_(std::move(ar)), ma_(std::move(ma)) {
  require(std::isfinite(sigma_) && sigma_ > 0.0, ErrorKind::validation, "sigma must be positive");
  check_finite(ar_, "AR coefficients");
  check_finite(ma_, "MA coefficients");
  require(ar_stationary(ar_), ErrorKind::validation, "AR polynomial has a root on or inside the unit circle");

  // Grow the table until the ACF has stayed negligible for max(p, 1) lags past q.
  std::vector<double> gamma;
  std::size_t len = std::max<std::size_t>(64, 4 * (order() + 1));
  for (;;) {
    gamma = arma_autocovariance(ar_, ma_, len);
    gamma0_ = gamma[0];
    const std::size_t run = std::max<std::size_t>(ar_.size(), 1);
    std::size_t quiet = 0, cut = 0;
    bool found = false;
    for (std::size_t k = 1; k <= len; ++k) {
      if (std::abs(gamma[k] / gamma0_) < kAcfCutoff && k > ma_.size()) {
        if (++quiet >= run) {
          cut = k - quiet + 1;
          found = true;
          break;
        }
      } else {
        quiet = 0;
      }
    }
    if (found || len >= kMaxAcfLags) {
      if (!found) cut = len + 1;
      auto table = std::make_shared<std::vector<double>>(gamma.begin(), gamma.begin() + static_cast<long>(cut));
      for (double& x : *table) x /= gamma0_;
      acf_ = std::move(table);
      return;
    }
    len = std::min(kMaxAcfLags, len * 4);
  }
}

ReturnProcess ReturnProcess::white_noise(double sigma) { return {ProcessKind::white_noise, sigma, {}, {}}; }

ReturnProcess ReturnProcess::ar(double sigma, std::vector<double> ar) {
  return {ar.empty() ? ProcessKind::white_noise : ProcessKind::ar, sigma, std::move(ar), {}};
}

ReturnProcess ReturnProcess::ma(double sigma, std::vector<double> ma) {
  return {ma.empty() ? ProcessKind::white_noise : ProcessKind::ma, sigma, {}, std::move(ma)};
}

ReturnProcess ReturnProcess::arma(double sigma, std::vector<double> ar, std::vector<double> ma) {
  ProcessKind kind = ProcessKind::arma;
  if (ar.empty() && ma.empty()) kind = ProcessKind::white_noise;
  else if (ma.empty()) kind = ProcessKind::ar;
  else if (ar.empty()) kind = ProcessKind::ma;
  return {kind, sigma, std::move(ar), std::move(ma)};
}

double ReturnProcess::acf(long lag) const {
  const auto k = static_cast<std::size_t>(lag < 0 ? -lag : lag);
  return k < acf_->size() ? (*acf_)[k] : 0.0;
}

std::vector<double> ReturnProcess::wold_coefficients(std::size_t n) const { return psi_weights(ar_, ma_, n); }

Eigen::MatrixXd acf_toeplitz(const ReturnProcess& process, std::size_t k) {
  require(k >= 1, ErrorKind::validation, "Toeplitz dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = process.acf(static_cast<long>(i - j));
  return c;
}

std::size_t burn_in_length(const ReturnProcess& process) {
  return std::max({10 * process.order(), std::size_t{1000}, process.acf_table().size()});
}

std::vector<double> simulate_returns(const ReturnProcess& process, std::size_t length, std::uint64_t seed,
                                     std::uint64_t stream, Innovation law) {
  require(length >= 1, ErrorKind::validation, "path length must be at least 1");
  const auto& ar = process.ar_coeffs();
  const auto& ma = process.ma_coeffs();
  const std::size_t p = ar.size(), q = ma.size();
  const std::size_t burn = burn_in_length(process);
  const std::size_t total = burn + length;
  const double scale = process.sigma() / std::sqrt(process.innovation_gain());

  Rng rng(seed, stream);
  std::vector<double> y(total), e(total);
  for (std::size_t t = 0; t < total; ++t) {
    e[t] = draw_innovation(rng, law);
    double v = e[t];
    for (std::size_t j = 1; j <= std::min(q, t); ++j) v += ma[j - 1] * e[t - j];
    for (std::size_t i = 1; i <= std::min(p, t); ++i) v += ar[i - 1] * y[t - i];
    y[t] = v;
  }
  std::vector<double> out(length);
  for (std::size_t t = 0; t < length; ++t) out[t] = scale * y[burn + t];
  return out;
}

}  // namespace dynstrat
