#include "dynstrat/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dynstrat/errors.hpp"
#include "dynstrat/parallel.hpp"
#include "dynstrat/rng.hpp"

namespace dynstrat {

namespace {

const double kFold = std::sqrt(2.0 / std::numbers::pi);

// x' T x for the Toeplitz matrix T_ij = acf(|i - j|), returned with T x.
double toeplitz_form(const std::vector<double>& x, const ReturnProcess& p, std::vector<double>* tx) {
  const std::size_t n = x.size();
  std::vector<double> acf(n);
  for (std::size_t d = 0; d < n; ++d) acf[d] = p.acf(static_cast<long>(d));
  double q = 0.0;
  if (tx) tx->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += acf[i > j ? i - j : j - i] * x[j];
    if (tx) (*tx)[i] = row;
    q += x[i] * row;
  }
  return q;
}

std::vector<double> differences(const std::vector<double>& phi) {
  const std::size_t k = phi.size();
  std::vector<double> d(k + 2, 0.0);
  for (std::size_t i = 1; i <= k; ++i) d[i] = phi[i - 1] - (i >= 2 ? phi[i - 2] : 0.0);
  d[k + 1] = -phi[k - 1];
  return d;
}

double lead_cov(const std::vector<double>& phi, const ReturnProcess& p) {
  double s = 0.0;
  for (std::size_t k = 1; k <= phi.size(); ++k) s += phi[k - 1] * p.acf(static_cast<long>(k));
  return s;
}

struct Bfgs {
  std::vector<double> x;
  double f = 0;
  int iterations = 0;
  bool converged = false;
};

// Maximizes f by minimizing -f.
Bfgs bfgs_maximize(std::vector<double> x, const ReturnProcess& p, const CostSpec& cost) {
  const std::size_t n = x.size();
  std::vector<double> g(n), gn(n);
  auto eval = [&](const std::vector<double>& v, std::vector<double>& grad) {
    const double u = tc_utility_smoothed(v, p, cost, &grad);
    for (double& gi : grad) gi = -gi;
    return -u;
  };
  double f = eval(x, g);
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  Bfgs out;
  constexpr int kMaxIter = 2000;
  for (int it = 0; it < kMaxIter; ++it) {
    out.iterations = it;
    double gnorm = 0.0, xnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gnorm = std::max(gnorm, std::abs(g[i]));
      xnorm = std::max(xnorm, std::abs(x[i]));
    }
    if (gnorm <= 1e-10 * std::max(1.0, std::abs(f))) {
      out.converged = true;
      break;
    }
    std::vector<double> dir(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dir[i] -= h[i * n + j] * g[j];
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
    if (slope >= 0.0) {
      // Lost descent: reset to steepest descent.
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        h[i * n + i] = 1.0;
        dir[i] = -g[i];
      }
      slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope -= g[i] * g[i];
    }
    double step = 1.0, fn = 0.0;
    std::vector<double> xn(n);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * dir[i];
      fn = eval(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No further decrease at machine resolution.
      out.converged = gnorm <= 1e-6 * std::max(1.0, std::abs(f));
      break;
    }
    std::vector<double> s(n), y(n);
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
    }
    const double df = f - fn;
    x = xn;
    g = gn;
    f = fn;
    if (sy > 1e-300) {
      std::vector<double> hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      double yhy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yhy += y[i] * hy[i];
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i * n + j] += (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
    }
    if (df >= 0.0 && df <= 1e-16 * std::max(1.0, std::abs(f))) {
      double gmax = 0.0;
      for (double gi : g) gmax = std::max(gmax, std::abs(gi));
      if (gmax <= 1e-6 * std::max(1.0, std::abs(f))) {
        out.converged = true;
        break;
      }
    }
  }
  out.x = std::move(x);
  out.f = -f;
  return out;
}

double gradient_check(const std::vector<double>& x, const ReturnProcess& p, const CostSpec& cost) {
  std::vector<double> g;
  tc_utility_smoothed(x, p, cost, &g);
  double scale = 0.0;
  for (double gi : g) scale = std::max(scale, std::abs(gi));
  scale = std::max(scale, 1e-8);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (tc_utility_smoothed(xp, p, cost, nullptr) - tc_utility_smoothed(xm, p, cost, nullptr)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / scale);
  }
  return worst;
}

}  // namespace

void CostSpec::validate() const {
  require(std::isfinite(gamma_risk) && gamma_risk >= 0.0, ErrorKind::validation, "gamma must be nonnegative");
  require(std::isfinite(nu) && nu >= 0.0, ErrorKind::validation, "nu must be nonnegative");
}

std::vector<double> difference_coefficients(const ConvolutionFilter& filter) {
  require(!filter.coeffs.empty(), ErrorKind::validation, "filter must have at least one coefficient");
  return differences(filter.coeffs);
}

double expected_turnover(const ConvolutionFilter& filter, const ReturnProcess& process) {
  const std::vector<double> d = difference_coefficients(filter);
  return kFold * process.sigma() * std::sqrt(std::max(0.0, toeplitz_form(d, process, nullptr)));
}

double tc_utility(const ConvolutionFilter& filter, const ReturnProcess& process, const CostSpec& cost) {
  cost.validate();
  require(!filter.coeffs.empty(), ErrorKind::validation, "filter must have at least one coefficient");
  const double s2 = process.sigma() * process.sigma();
  const double m = lead_cov(filter.coeffs, process);
  const double q = toeplitz_form(filter.coeffs, process, nullptr);
  return s2 * m - cost.gamma_risk * s2 * s2 * (q + m * m) - cost.nu * expected_turnover(filter, process);
}

double tc_utility_surrogate(const ConvolutionFilter& filter, const ReturnProcess& process, const CostSpec& cost) {
  cost.validate();
  require(!filter.coeffs.empty(), ErrorKind::validation, "filter must have at least one coefficient");
  const double s2 = process.sigma() * process.sigma();
  const double m = lead_cov(filter.coeffs, process);
  const double q = toeplitz_form(filter.coeffs, process, nullptr);
  return s2 * std::sqrt(q) * m - cost.gamma_risk * s2 * s2 * q * (1.0 + m * m) - cost.nu * expected_turnover(filter, process);
}

double tc_utility_smoothed(const std::vector<double>& phi, const ReturnProcess& process, const CostSpec& cost,
                           std::vector<double>* gradient, double eps) {
  const std::size_t k = phi.size();
  const double sigma = process.sigma(), s2 = sigma * sigma;
  std::vector<double> c(k), cphi, cd;
  for (std::size_t i = 0; i < k; ++i) c[i] = process.acf(static_cast<long>(i + 1));
  double m = 0.0;
  for (std::size_t i = 0; i < k; ++i) m += phi[i] * c[i];
  const double q = toeplitz_form(phi, process, gradient ? &cphi : nullptr);
  const std::vector<double> d = differences(phi);
  const double qd = toeplitz_form(d, process, gradient ? &cd : nullptr);
  const double root = std::sqrt(std::max(0.0, qd) + eps);
  const double u = s2 * m - cost.gamma_risk * s2 * s2 * (q + m * m) - cost.nu * kFold * sigma * root;
  if (gradient) {
    gradient->assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      // D'(C d) at phi_j picks entries j+1 and j+2 of the difference vector (0-based).
      const double dt = cd[j + 1] - cd[j + 2];
      (*gradient)[j] = s2 * c[j] - cost.gamma_risk * s2 * s2 * (2.0 * cphi[j] + 2.0 * m * c[j]) -
                       cost.nu * kFold * sigma * dt / root;
    }
  }
  return u;
}

OptimizeResult optimize_tc_utility(const ReturnProcess& process, int k, const CostSpec& cost,
                                   const std::optional<ConvolutionFilter>& init, std::uint64_t seed, int starts) {
  require(k >= 1, ErrorKind::validation, "filter length must be at least 1");
  require(starts >= 1, ErrorKind::validation, "need at least one start");
  cost.validate();
  if (init) require(init->size() == static_cast<std::size_t>(k), ErrorKind::validation, "initial filter length must equal k");
  const auto n = static_cast<std::size_t>(starts);
  std::vector<Bfgs> runs(n);
  parallel_for(n, [&](std::size_t s) {
    std::vector<double> x0;
    if (s == 0) {
      x0 = init ? init->coeffs : std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
    } else {
      Rng rng(seed, s);
      x0.resize(static_cast<std::size_t>(k));
      for (double& v : x0) v = rng.normal() / std::sqrt(static_cast<double>(k));
    }
    runs[s] = bfgs_maximize(std::move(x0), process, cost);
  });
  OptimizeResult out;
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    out.start_utilities.push_back(runs[s].f);
    if (runs[s].f > runs[best].f) best = s;
  }
  const Bfgs& b = runs[best];
  out.best_start = best;
  out.iterations = b.iterations;
  out.converged = b.converged;
  out.filter = {b.x, "tc_optimal(k=" + std::to_string(k) + ")"};
  out.utility = tc_utility(out.filter, process, cost);
  bool nonzero = false;
  for (double v : b.x) nonzero = nonzero || v != 0.0;
  out.correlation = nonzero ? signal_return_correlation(out.filter, process) : 0.0;
  out.gradient_check = gradient_check(b.x, process, cost);
  if (!out.converged) out.warning = "iteration budget exhausted before the gradient vanished; returning the best point found";
  if (out.gradient_check > 1e-5) {
    if (!out.warning.empty()) out.warning += "; ";
    out.warning += "finite-difference gradient check above 1e-5";
  }
  return out;
}

}  // namespace dynstrat
