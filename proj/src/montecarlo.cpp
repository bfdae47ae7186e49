#include "dynstrat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <tuple>

#include "dynstrat/analytics.hpp"
#include "dynstrat/errors.hpp"
#include "dynstrat/kernels.hpp"
#include "dynstrat/parallel.hpp"
#include "dynstrat/rng.hpp"
#include "dynstrat/standard_errors.hpp"

namespace dynstrat {

namespace {

constexpr std::size_t kChunk = 1 << 16;

struct Moments {
  double mean = 0, var = 0, skew = 0, kurt = 0;
};

// Moments from power sums about a shift.
Moments from_power_sums(double n, double shift, double s1, double s2, double s3, double s4) {
  const double d = s1 / n, m2 = s2 / n, m3 = s3 / n, m4 = s4 / n;
  Moments m;
  m.mean = shift + d;
  m.var = m2 - d * d;
  const double c3 = m3 - 3.0 * d * m2 + 2.0 * d * d * d;
  const double c4 = m4 - 4.0 * d * m3 + 6.0 * d * d * m2 - 3.0 * d * d * d * d;
  m.skew = c3 / std::pow(m.var, 1.5);
  m.kurt = c4 / (m.var * m.var);
  return m;
}

std::size_t effective_block(std::size_t n, std::size_t block) {
  return std::max<std::size_t>(1, std::min(block, n / 8));
}

struct PairStats {
  double rho_hat, sr, skew, kurt;
};

PairStats pair_trial(double rho, long t, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  const double c = std::sqrt(1.0 - rho * rho);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::vector<double> s(static_cast<std::size_t>(t));
  for (long i = 0; i < t; ++i) {
    const double x = rng.normal(), y = rho * x + c * rng.normal();
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    s[static_cast<std::size_t>(i)] = x * y;
  }
  const double n = static_cast<double>(t);
  const double cxy = sxy / n - sx * sy / (n * n), vx = sxx / n - sx * sx / (n * n), vy = syy / n - sy * sy / (n * n);
  const double shift = s[0];
  const auto ps = kernels::power_sums(s, shift);
  const Moments m = from_power_sums(n, shift, ps.s1, ps.s2, ps.s3, ps.s4);
  return {cxy / std::sqrt(vx * vy), m.mean / std::sqrt(m.var), m.skew, m.kurt};
}

// Linear interpolation of exact SR interval endpoints over a rho_hat grid.
class ExactIntervalTable {
 public:
  ExactIntervalTable(double lo, double hi, long t, double level) : lo_(lo), hi_(hi) {
    constexpr std::size_t kNodes = 161;
    lo_ = std::max(-0.999, lo);
    hi_ = std::min(0.999, std::max(hi, lo_ + 1e-9));
    step_ = (hi_ - lo_) / (kNodes - 1);
    lower_.resize(kNodes);
    upper_.resize(kNodes);
    parallel_for(kNodes, [&](std::size_t i) {
      const auto [a, b] = exact_sharpe_interval(lo_ + step_ * i, t, level);
      lower_[i] = a;
      upper_[i] = b;
    });
  }
  std::pair<double, double> operator()(double r) const {
    const double u = std::clamp((r - lo_) / step_, 0.0, static_cast<double>(lower_.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(u), lower_.size() - 2);
    const double f = u - i;
    return {lower_[i] + f * (lower_[i + 1] - lower_[i]), upper_[i] + f * (upper_[i + 1] - upper_[i])};
  }

 private:
  double lo_, hi_, step_ = 0;
  std::vector<double> lower_, upper_;
};

}  // namespace

void SimulationPlan::validate() const {
  require(!filter.coeffs.empty(), ErrorKind::validation, "filter must have at least one coefficient");
  require(path_length > filter.size(), ErrorKind::validation, "path length must exceed the filter length");
  require(n_paths >= 1, ErrorKind::validation, "need at least one path");
}

std::vector<StrategyPath> simulate_strategy_paths(const SimulationPlan& plan) {
  plan.validate();
  std::vector<StrategyPath> out(plan.n_paths);
  const std::size_t k = plan.filter.size();
  parallel_for(plan.n_paths, [&](std::size_t p) {
    const std::vector<double> r = simulate_returns(plan.process, plan.path_length, plan.seed, p);
    StrategyPath& path = out[p];
    path.signals.resize(r.size() - k);
    kernels::causal_filter(r, plan.filter.coeffs, path.signals);
    path.returns.assign(r.begin() + static_cast<long>(k), r.end());
    path.strategy.resize(path.returns.size());
    kernels::multiply(path.signals, path.returns, path.strategy);
  });
  return out;
}

std::vector<std::vector<double>> simulate_strategy(const SimulationPlan& plan) {
  auto paths = simulate_strategy_paths(plan);
  std::vector<std::vector<double>> out;
  out.reserve(paths.size());
  for (auto& p : paths) out.push_back(std::move(p.strategy));
  return out;
}

JackknifeEstimate block_jackknife(const std::vector<std::vector<double>>& block_sums,
                                  const std::function<double(const std::vector<double>&)>& stat) {
  const std::size_t b = block_sums.size();
  require(b >= 2, ErrorKind::sample_size, "jackknife needs at least two blocks");
  const std::size_t m = block_sums[0].size();
  std::vector<double> total(m, 0.0);
  for (const auto& row : block_sums)
    for (std::size_t j = 0; j < m; ++j) total[j] += row[j];
  JackknifeEstimate est;
  est.value = stat(total);
  std::vector<double> loo(b), tmp(m);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < m; ++j) tmp[j] = total[j] - block_sums[i][j];
    loo[i] = stat(tmp);
  }
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  est.se = std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
  return est;
}

EmpiricalMoments empirical_moments(std::span<const double> x, std::size_t block) {
  require(x.size() >= 8, ErrorKind::sample_size, "empirical moments need at least 8 samples");
  const std::size_t bs = effective_block(x.size(), block);
  const std::size_t nb = x.size() / bs;
  const double shift = x[0];
  // Trailing partial block is folded into the last one.
  std::vector<std::vector<double>> sums(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t lo = i * bs, hi = (i + 1 == nb) ? x.size() : lo + bs;
    const auto ps = kernels::power_sums(x.subspan(lo, hi - lo), shift);
    sums[i] = {static_cast<double>(ps.n), ps.s1, ps.s2, ps.s3, ps.s4};
  }
  auto mom = [&](const std::vector<double>& s) { return from_power_sums(s[0], shift, s[1], s[2], s[3], s[4]); };
  EmpiricalMoments e;
  e.n = x.size();
  const auto mean = block_jackknife(sums, [&](const auto& s) { return mom(s).mean; });
  const auto var = block_jackknife(sums, [&](const auto& s) { return mom(s).var; });
  e.mean = mean.value;
  e.se_mean = mean.se;
  e.variance = var.value;
  e.se_variance = var.se;
  if (!(e.variance > 1e-300 * std::max(1.0, e.mean * e.mean))) {
    e.variance = 0.0;
    e.flag = "zero variance: skewness, kurtosis and sharpe are undefined";
    e.skewness = e.kurtosis = e.sharpe = std::nan("");
    return e;
  }
  const auto sk = block_jackknife(sums, [&](const auto& s) { return mom(s).skew; });
  const auto ku = block_jackknife(sums, [&](const auto& s) { return mom(s).kurt; });
  const auto sr = block_jackknife(sums, [&](const auto& s) {
    const Moments m = mom(s);
    return m.mean / std::sqrt(m.var);
  });
  e.skewness = sk.value;
  e.se_skewness = sk.se;
  e.kurtosis = ku.value;
  e.se_kurtosis = ku.se;
  e.sharpe = sr.value;
  e.se_sharpe = sr.se;
  return e;
}

JackknifeEstimate empirical_correlation(std::span<const double> x, std::span<const double> y, std::size_t block) {
  require(x.size() == y.size(), ErrorKind::validation, "correlation needs equal-length series");
  require(x.size() >= 8, ErrorKind::sample_size, "correlation needs at least 8 samples");
  const std::size_t bs = effective_block(x.size(), block);
  const std::size_t nb = x.size() / bs;
  const double sx0 = x[0], sy0 = y[0];
  std::vector<std::vector<double>> sums(nb, std::vector<double>(6, 0.0));
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t lo = i * bs, hi = (i + 1 == nb) ? x.size() : lo + bs;
    auto& s = sums[i];
    for (std::size_t j = lo; j < hi; ++j) {
      const double a = x[j] - sx0, b = y[j] - sy0;
      s[0] += 1.0;
      s[1] += a;
      s[2] += b;
      s[3] += a * a;
      s[4] += b * b;
      s[5] += a * b;
    }
  }
  auto corr = [](const std::vector<double>& s) {
    const double n = s[0];
    const double cxy = s[5] / n - s[1] * s[2] / (n * n);
    const double vx = s[3] / n - s[1] * s[1] / (n * n), vy = s[4] / n - s[2] * s[2] / (n * n);
    return cxy / std::sqrt(vx * vy);
  };
  return block_jackknife(sums, corr);
}

std::vector<double> simulate_product_pairs(double rho, std::size_t draws, std::uint64_t seed) {
  require(std::abs(rho) <= 1.0, ErrorKind::validation, "correlation must lie in [-1, 1]");
  std::vector<double> out(draws);
  const double c = std::sqrt(1.0 - rho * rho);
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t ch) {
    Rng rng(seed, ch);
    const std::size_t lo = ch * kChunk, hi = std::min(draws, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = rng.normal(), y = rho * x + c * rng.normal();
      out[i] = x * y;
    }
  });
  return out;
}

std::vector<double> simulate_multi_asset(int n, double rho, std::size_t draws, std::uint64_t seed) {
  require(n >= 1, ErrorKind::validation, "asset count must be at least 1");
  require(std::abs(rho) <= 1.0, ErrorKind::validation, "correlation must lie in [-1, 1]");
  std::vector<double> out(draws);
  const double c = std::sqrt(1.0 - rho * rho);
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t ch) {
    Rng rng(seed, ch);
    const std::size_t lo = ch * kChunk, hi = std::min(draws, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        const double x = rng.normal(), y = rho * x + c * rng.normal();
        s += x * y;
      }
      out[i] = s;
    }
  });
  return out;
}

const char* to_string(CoverageMethod m) {
  switch (m) {
    case CoverageMethod::implied_exact: return "implied_exact";
    case CoverageMethod::implied_gaussian: return "implied_gaussian";
    case CoverageMethod::lo: return "lo";
    case CoverageMethod::mertens: return "mertens";
    case CoverageMethod::gaussian_skew: return "gaussian_skew";
    case CoverageMethod::gaussian_kurt: return "gaussian_kurt";
    case CoverageMethod::implied_skew: return "implied_skew";
    case CoverageMethod::implied_kurt: return "implied_kurt";
  }
  return "?";
}

CoverageMethod coverage_method_from_string(const std::string& name) {
  for (auto m : {CoverageMethod::implied_exact, CoverageMethod::implied_gaussian, CoverageMethod::lo, CoverageMethod::mertens,
                 CoverageMethod::gaussian_skew, CoverageMethod::gaussian_kurt, CoverageMethod::implied_skew,
                 CoverageMethod::implied_kurt})
    if (name == to_string(m)) return m;
  if (name == "implied") return CoverageMethod::implied_exact;
  fail(ErrorKind::validation, "unknown coverage method '" + name + "'");
}

CoverageResult coverage_experiment(double rho, long t, std::size_t n_trials, CoverageMethod method, std::uint64_t seed,
                                   double level) {
  require(std::abs(rho) < 1.0, ErrorKind::validation, "coverage needs |rho| < 1");
  require(t >= 8, ErrorKind::sample_size, "coverage needs T >= 8");
  require(n_trials >= 1000, ErrorKind::validation, "coverage needs at least 1000 trials");
  const ShapeStats truth = dimensionless_stats(rho);
  std::vector<PairStats> trials(n_trials);
  parallel_for(n_trials, [&](std::size_t i) { trials[i] = pair_trial(rho, t, seed, i); });

  CoverageResult res;
  res.method = method;
  res.rho = rho;
  res.t = t;
  res.n_trials = n_trials;
  res.level = level;
  res.true_value = method == CoverageMethod::gaussian_skew || method == CoverageMethod::implied_skew ? truth.skewness
                   : method == CoverageMethod::gaussian_kurt || method == CoverageMethod::implied_kurt ? truth.kurtosis
                                                                                                        : truth.sharpe;
  const double z = normal_critical_value(level);
  std::unique_ptr<ExactIntervalTable> table;
  if (method == CoverageMethod::implied_exact) {
    double lo = 1.0, hi = -1.0;
    for (const auto& tr : trials) {
      lo = std::min(lo, tr.rho_hat);
      hi = std::max(hi, tr.rho_hat);
    }
    table = std::make_unique<ExactIntervalTable>(lo, hi, t, level);
  }
  std::size_t hits = 0;
  for (const auto& tr : trials) {
    double a = 0, b = 0;
    switch (method) {
      case CoverageMethod::implied_exact: std::tie(a, b) = (*table)(tr.rho_hat); break;
      case CoverageMethod::implied_gaussian: {
        const double e = dimensionless_stats(tr.rho_hat).sharpe, se = stderr_sharpe_implied(tr.rho_hat, t);
        a = e - z * se;
        b = e + z * se;
        break;
      }
      case CoverageMethod::lo: {
        const double se = stderr_sharpe_lo(tr.sr, t);
        a = tr.sr - z * se;
        b = tr.sr + z * se;
        break;
      }
      case CoverageMethod::mertens: {
        const double se = stderr_sharpe_mertens(tr.sr, tr.skew, tr.kurt, t);
        a = tr.sr - z * se;
        b = tr.sr + z * se;
        break;
      }
      case CoverageMethod::gaussian_skew: {
        const double se = stderr_gaussian_baseline(t).skew;
        a = tr.skew - z * se;
        b = tr.skew + z * se;
        break;
      }
      case CoverageMethod::gaussian_kurt: {
        const double se = stderr_gaussian_baseline(t).kurt;
        a = tr.kurt - z * se;
        b = tr.kurt + z * se;
        break;
      }
      case CoverageMethod::implied_skew: {
        const double e = dimensionless_stats(tr.rho_hat).skewness, se = stderr_skew_implied(tr.rho_hat, t);
        a = e - z * se;
        b = e + z * se;
        break;
      }
      case CoverageMethod::implied_kurt: {
        const double e = dimensionless_stats(tr.rho_hat).kurtosis, se = stderr_kurt_implied(tr.rho_hat, t);
        a = e - z * se;
        b = e + z * se;
        break;
      }
    }
    if (a <= res.true_value && res.true_value <= b) ++hits;
  }
  res.coverage = static_cast<double>(hits) / static_cast<double>(n_trials);
  res.coverage_stderr = std::sqrt(res.coverage * (1.0 - res.coverage) / static_cast<double>(n_trials));
  return res;
}

double bootstrap_sharpe_sd(double rho, long t, std::size_t n_boot, std::uint64_t seed) {
  require(std::abs(rho) < 1.0, ErrorKind::validation, "bootstrap needs |rho| < 1");
  require(t >= 8 && n_boot >= 2, ErrorKind::sample_size, "bootstrap needs T >= 8 and at least two resamples");
  Rng rng(seed, 0);
  const double c = std::sqrt(1.0 - rho * rho);
  std::vector<double> x(static_cast<std::size_t>(t)), y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    y[i] = rho * x[i] + c * rng.normal();
  }
  std::vector<double> sr(n_boot);
  parallel_for(n_boot, [&](std::size_t b) {
    Rng r(seed, b + 1);
    const double n = static_cast<double>(t);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (long i = 0; i < t; ++i) {
      const auto j = static_cast<std::size_t>(r.uniform() * n);
      sx += x[j];
      sy += y[j];
      sxx += x[j] * x[j];
      syy += y[j] * y[j];
      sxy += x[j] * y[j];
    }
    const double cxy = sxy / n - sx * sy / (n * n), vx = sxx / n - sx * sx / (n * n), vy = syy / n - sy * sy / (n * n);
    sr[b] = dimensionless_stats(std::clamp(cxy / std::sqrt(vx * vy), -1.0, 1.0)).sharpe;
  });
  double m = 0.0;
  for (double v : sr) m += v;
  m /= static_cast<double>(n_boot);
  double ss = 0.0;
  for (double v : sr) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n_boot - 1));
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::sample_size, "KS distance needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

std::vector<ConvergencePoint> convergence_demo(const ReturnProcess& process, const ConvolutionFilter& filter,
                                               const std::vector<int>& n_grid, Innovation law, std::size_t draws,
                                               std::uint64_t seed) {
  require(!n_grid.empty(), ErrorKind::validation, "truncation grid must be non-empty");
  require(draws >= 1000, ErrorKind::validation, "convergence demo needs at least 1000 draws");
  std::vector<ConvergencePoint> out;
  for (int n : n_grid) {
    require(n >= 1, ErrorKind::validation, "truncation lengths must be positive");
    const auto nn = static_cast<std::size_t>(n);
    const std::vector<double> b = process.wold_coefficients(nn);
    // h_j = sum_k phi_k b_{j-k}, j = 1..N
    std::vector<double> h(nn + 1, 0.0);
    for (std::size_t j = 1; j <= nn; ++j)
      for (std::size_t k = 1; k <= std::min(j, filter.size()); ++k) h[j] += filter.coeffs[k - 1] * b[j - k];
    double nb = 0, nh = 0, cross = 0;
    for (std::size_t j = 0; j < nn; ++j) nb += b[j] * b[j];
    for (std::size_t j = 1; j <= nn; ++j) {
      nh += h[j] * h[j];
      if (j < nn) cross += h[j] * b[j];
    }
    require(nh > 0.0, ErrorKind::degenerate, "truncated signal has zero variance at N=" + std::to_string(n));
    const double sb = std::sqrt(nb), sh = std::sqrt(nh);
    const double corr = cross / (sb * sh);

    std::vector<double> target(draws), reference(draws);
    const std::size_t chunks = (draws + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t ch) {
      Rng rng(seed, ch), grng(seed ^ 0x9e3779b97f4a7c15ULL, ch);
      std::vector<double> e(nn + 1);
      const double c = std::sqrt(std::max(0.0, 1.0 - corr * corr));
      const std::size_t lo = ch * kChunk, hi = std::min(draws, lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        for (auto& v : e) v = draw_innovation(rng, law);
        double r = 0.0, x = 0.0;
        for (std::size_t j = 0; j < nn; ++j) r += b[j] * e[j];
        for (std::size_t j = 1; j <= nn; ++j) x += h[j] * e[j];
        target[i] = (r / sb) * (x / sh);
        const double u = grng.normal(), w = corr * u + c * grng.normal();
        reference[i] = u * w;
      }
    });
    out.push_back({n, corr, ks_distance(std::move(target), std::move(reference))});
  }
  return out;
}

}  // namespace dynstrat
