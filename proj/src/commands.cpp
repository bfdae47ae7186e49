#include "dynstrat/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dynstrat/density.hpp"
#include "dynstrat/errors.hpp"
#include "dynstrat/kernels.hpp"
#include "dynstrat/parallel.hpp"

namespace dynstrat {

namespace {

std::string f17(double x) { return format_double(x); }

double sample_corr(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i] - mx, b = y[i] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  require(sxx > 0.0, ErrorKind::degenerate, "signal has zero sample variance");
  require(syy > 0.0, ErrorKind::degenerate, "returns have zero sample variance");
  return sxy / std::sqrt(sxx * syy);
}

double sample_sharpe(std::span<const double> s) {
  const double n = static_cast<double>(s.size());
  double m = 0;
  for (double v : s) m += v;
  m /= n;
  double ss = 0;
  for (double v : s) ss += (v - m) * (v - m);
  return ss > 0.0 ? m / std::sqrt(ss / n) : std::nan("");
}

json optional_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json cmd_analyze(std::span<const double> returns, const FilterSpec& spec, double periods_per_year) {
  const ConvolutionFilter filter = build_filter(spec);
  const std::size_t k = filter.size();
  require(returns.size() > k + 2, ErrorKind::sample_size,
          "need more than K + 2 returns (strategy sample T must satisfy T - 2 > 0)");
  const std::vector<double> x = apply_filter(filter, returns);
  const std::span<const double> r = returns.subspan(k);
  const long t = static_cast<long>(x.size());
  {
    double lo = r[0], hi = r[0];
    for (double v : returns) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    require(hi > lo, ErrorKind::degenerate, "returns are constant; correlation is undefined");
  }
  std::vector<double> s(x.size());
  kernels::multiply(x, r, s);
  const double rho_hat = std::clamp(sample_corr(x, r), -1.0, 1.0);
  const ShapeStats plug = dimensionless_stats(rho_hat);

  json out;
  out["filter"] = filter_to_json(filter);
  out["filter_spec"] = filter_spec_to_json(spec);
  out["sample_size"] = t;
  out["rho_hat"] = rho_hat;
  out["plug_in"] = to_json(plug);

  double sr_hat = plug.sharpe;
  if (t >= 8) {
    const EmpiricalMoments em = empirical_moments(s);
    out["empirical"] = to_json(em);
    if (std::isfinite(em.sharpe)) sr_hat = em.sharpe;
    if (std::isfinite(em.skewness)) {
      out["jarque_bera"] = {{"empirical", jarque_bera(t, 0, em.skewness, em.kurtosis)}, {"floor", jb_floor(t, 0)},
                            {"plug_in", jarque_bera(t, 0, plug.skewness, plug.kurtosis)}};
    }
  } else {
    out["empirical"] = nullptr;
    out["jarque_bera"] = {{"floor", jb_floor(t, 0)}, {"plug_in", jarque_bera(t, 0, plug.skewness, plug.kurtosis)}};
  }
  json se;
  se["sharpe"] = to_json(sharpe_stderr_report(rho_hat, sr_hat, plug.skewness, plug.kurtosis, t));
  se["sharpe"]["mertens_moments"] = "plug_in";
  se["sharpe"]["lo_mertens_sharpe"] = sr_hat;
  if (t >= 4) {
    se["skewness"] = to_json(skewness_stderr_report(rho_hat, t));
    se["kurtosis"] = to_json(kurtosis_stderr_report(rho_hat, t));
  }
  out["stderr"] = se;
  out["annualized_sharpe"] = {{"periods_per_year", periods_per_year},
                              {"plug_in", annualize_sharpe(plug.sharpe, periods_per_year)},
                              {"empirical", annualize_sharpe(sr_hat, periods_per_year)}};
  return out;
}

SweepFamily sweep_family_from_string(const std::string& name) {
  if (name == "ewma") return SweepFamily::ewma;
  if (name == "sma") return SweepFamily::sma;
  if (name == "holt_winters" || name == "holt-winters" || name == "holt-winters-linearized" || name == "hw")
    return SweepFamily::holt_winters;
  fail(ErrorKind::validation, "unknown sweep family '" + name + "'");
}

void cmd_sweep(std::span<const double> returns, SweepFamily family, const std::vector<double>& grid,
               const std::vector<double>& grid2, std::ostream& out) {
  require(!grid.empty(), ErrorKind::validation, "sweep grid must be non-empty");
  std::vector<std::pair<double, double>> points;
  if (family == SweepFamily::holt_winters) {
    require(!grid2.empty(), ErrorKind::validation, "Holt-Winters sweep needs a beta grid");
    for (double a : grid)
      for (double b : grid2) points.emplace_back(a, b);
  } else {
    for (double a : grid) points.emplace_back(a, 0.0);
  }
  std::vector<ConvolutionFilter> filters;
  for (const auto& [a, b] : points) {
    switch (family) {
      case SweepFamily::ewma: filters.push_back(ewma_filter(a)); break;
      case SweepFamily::sma:
        require(a == std::floor(a), ErrorKind::validation, "SMA windows must be integers");
        filters.push_back(sma_filter(static_cast<int>(a)));
        break;
      case SweepFamily::holt_winters: filters.push_back(holt_winters_filter(a, b)); break;
    }
  }
  std::size_t start = 0;
  for (const auto& f : filters) start = std::max(start, f.size());
  require(returns.size() > start + 2, ErrorKind::sample_size, "return series shorter than the longest filter + 2");
  const std::span<const double> r = returns.subspan(start);

  struct Row {
    double mse, corr, sharpe;
  };
  std::vector<Row> rows(filters.size());
  parallel_for(filters.size(), [&](std::size_t i) {
    const std::vector<double> all = apply_filter(filters[i], returns);
    const std::span<const double> x = std::span<const double>(all).subspan(start - filters[i].size());
    double mse = 0.0;
    std::vector<double> s(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double e = r[j] - x[j];
      mse += e * e;
      s[j] = x[j] * r[j];
    }
    rows[i] = {mse / static_cast<double>(x.size()), sample_corr(x, r), sample_sharpe(s)};
  });
  switch (family) {
    case SweepFamily::ewma: out << "lambda"; break;
    case SweepFamily::sma: out << "t"; break;
    case SweepFamily::holt_winters: out << "alpha,beta"; break;
  }
  out << ",mse,correlation,sharpe\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << f17(points[i].first);
    if (family == SweepFamily::holt_winters) out << ',' << f17(points[i].second);
    out << ',' << f17(rows[i].mse) << ',' << f17(rows[i].corr) << ',' << f17(rows[i].sharpe) << '\n';
  }
}

FitKind fit_kind_from_string(const std::string& name) {
  if (name == "ols") return FitKind::ols;
  if (name == "tls") return FitKind::tls;
  if (name == "cca") return FitKind::cca;
  fail(ErrorKind::validation, "unknown fit method '" + name + "'");
}

json cmd_fit(const ReturnsFile& file, FitKind kind, int lags, bool standardize, const std::string& asset) {
  json out;
  out["method"] = kind == FitKind::ols ? "ols" : kind == FitKind::tls ? "tls" : "cca";
  out["lags"] = lags;
  out["standardized"] = standardize;
  if (kind == FitKind::cca) {
    std::vector<std::string> names;
    const Eigen::MatrixXd m = file.aligned(&names);
    require(lags >= 1, ErrorKind::validation, "lag count must be at least 1");
    const Eigen::Index t = m.rows() - lags, n = m.cols();
    require(t > n + n * lags, ErrorKind::sample_size, "too few rows for CCA with the requested lags");
    Eigen::MatrixXd rb = m.bottomRows(t);
    Eigen::MatrixXd xb(t, n * lags);
    for (int j = 1; j <= lags; ++j) xb.middleCols((j - 1) * n, n) = m.middleRows(lags - j, t);
    if (standardize) {
      for (Eigen::Index c = 0; c < rb.cols(); ++c) {
        rb.col(c).array() -= rb.col(c).mean();
        rb.col(c) /= std::sqrt(rb.col(c).squaredNorm() / static_cast<double>(t));
      }
      for (Eigen::Index c = 0; c < xb.cols(); ++c) {
        xb.col(c).array() -= xb.col(c).mean();
        xb.col(c) /= std::sqrt(xb.col(c).squaredNorm() / static_cast<double>(t));
      }
    }
    const CcaResult fit = cca(rb, xb);
    out["assets"] = names;
    out["sample_size"] = t;
    out["cca"] = to_json(fit);
    const Eigen::MatrixXd s = canonical_strategies(rb, xb, fit);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < s.cols(); ++i)
      for (Eigen::Index j = i + 1; j < s.cols(); ++j) {
        std::vector<double> a(s.col(i).data(), s.col(i).data() + t), b(s.col(j).data(), s.col(j).data() + t);
        worst = std::max(worst, std::abs(sample_corr(a, b)));
      }
    out["max_abs_strategy_correlation"] = worst;
    return out;
  }
  const std::vector<double> series = file.series(asset);
  DesignMatrix d = lagged_design(series, lags);
  if (standardize) d = standardized(d);
  out["sample_size"] = d.features.rows();
  Eigen::VectorXd beta;
  if (kind == FitKind::ols) {
    beta = ols_fit(d);
  } else {
    const TlsFit fit = tls_fit(d);
    beta = fit.beta;
    out["beta_pca"] = std::vector<double>(fit.beta_pca.data(), fit.beta_pca.data() + fit.beta_pca.size());
    out["sigma_min"] = fit.sigma_min;
  }
  out["coefficients"] = std::vector<double>(beta.data(), beta.data() + beta.size());
  const double corr = in_sample_correlation(d, beta);
  out["in_sample_correlation"] = corr;
  out["implied_sharpe"] = dimensionless_stats(std::clamp(corr, -1.0, 1.0)).sharpe;
  out["hat_trace"]["ols"] = hat_trace(d, FitMethod::ols);
  try {
    out["hat_trace"]["tls"] = hat_trace(d, FitMethod::tls);
  } catch (const Error& e) {
    if (kind == FitKind::tls) throw;
    out["hat_trace"]["tls"] = nullptr;
    out["hat_trace"]["tls_note"] = e.what();
  }
  return out;
}

json cmd_optimize(const ReturnProcess& process, int k, const CostSpec& cost, std::uint64_t seed, int starts) {
  const OptimizeResult res = optimize_tc_utility(process, k, cost, std::nullopt, seed, starts);
  json out;
  out["process"] = process_to_json(process);
  out["cost"] = {{"gamma", cost.gamma_risk}, {"nu", cost.nu}};
  out["k"] = k;
  out["seed"] = seed;
  out["result"] = to_json(res);
  out["result"]["expected_turnover"] = expected_turnover(res.filter, process);
  json cmp;
  try {
    const ConvolutionFilter mc = max_correlation_filter(process, k);
    cmp["max_correlation"] = {{"correlation", signal_return_correlation(mc, process)}, {"coeffs", mc.coeffs}};
  } catch (const Error& e) {
    cmp["max_correlation"] = {{"error", e.what()}};
  }
  try {
    const ConvolutionFilter ef = min_acf_eigen_filter(process, k);
    cmp["min_acf_eigen"] = {{"correlation", signal_return_correlation(ef, process)}, {"coeffs", ef.coeffs}};
  } catch (const Error& e) {
    cmp["min_acf_eigen"] = {{"error", e.what()}};
  }
  out["reference_filters"] = cmp;
  return out;
}

void cmd_density(const std::vector<double>& rhos, double s_min, double s_max, int points, bool unit_variance,
                 double sigma_r, double sigma_x, std::ostream& out) {
  require(!rhos.empty(), ErrorKind::validation, "need at least one correlation");
  require(points >= 2 && s_max > s_min, ErrorKind::validation, "density grid needs s_max > s_min and at least 2 points");
  out << "rho,s,pdf\n";
  for (double rho : rhos) {
    const ProductDensity d = unit_variance ? ProductDensity::unit_variance(rho) : ProductDensity{sigma_r, sigma_x, rho};
    for (int i = 0; i < points; ++i) {
      const double s = s_min + (s_max - s_min) * i / (points - 1);
      out << f17(rho) << ',' << f17(s) << ',' << f17(product_pdf(s, d)) << '\n';
    }
  }
}

void cmd_simulate_returns(const ReturnProcess& process, std::size_t length, std::uint64_t seed, std::ostream& out) {
  require(length >= 1, ErrorKind::validation, "length must be at least 1");
  write_returns_csv(out, simulate_returns(process, length, seed));
}

json cmd_simulate_report(const SimulationPlan& plan) {
  const auto paths = simulate_strategy_paths(plan);
  std::vector<double> s, x, r;
  for (const auto& p : paths) {
    s.insert(s.end(), p.strategy.begin(), p.strategy.end());
    x.insert(x.end(), p.signals.begin(), p.signals.end());
    r.insert(r.end(), p.returns.begin(), p.returns.end());
  }
  const EmpiricalMoments em = empirical_moments(s);
  const EmpiricalMoments ex = empirical_moments(x);
  const JackknifeEstimate corr = empirical_correlation(x, r);
  const double rho = signal_return_correlation(plan.filter, plan.process);
  const ShapeStats an = dimensionless_stats(rho);
  const double sx = std::sqrt(signal_variance(plan.filter, plan.process));
  auto row = [](double analytic, double empirical, double se) {
    return json{{"analytic", analytic}, {"empirical", optional_number(empirical)}, {"stderr", optional_number(se)},
                {"z", se > 0 ? json((empirical - analytic) / se) : json(nullptr)}};
  };
  const double sd_emp = std::sqrt(ex.variance);
  json out;
  out["process"] = process_to_json(plan.process);
  out["filter"] = filter_to_json(plan.filter);
  out["path_length"] = plan.path_length;
  out["n_paths"] = plan.n_paths;
  out["seed"] = plan.seed;
  out["rng_algorithm_version"] = kRngAlgorithmVersion;
  out["comparison"] = {{"sigma_x", row(sx, sd_emp, ex.se_variance / (2.0 * sd_emp))},
                       {"rho", row(rho, corr.value, corr.se)},
                       {"sharpe", row(an.sharpe, em.sharpe, em.se_sharpe)},
                       {"skewness", row(an.skewness, em.skewness, em.se_skewness)},
                       {"kurtosis", row(an.kurtosis, em.kurtosis, em.se_kurtosis)}};
  out["empirical_strategy"] = to_json(em);
  return out;
}

json cmd_coverage(double rho, long t, std::size_t trials, CoverageMethod method, std::uint64_t seed, double level) {
  json out = to_json(coverage_experiment(rho, t, trials, method, seed, level));
  out["seed"] = seed;
  return out;
}

void cmd_convergence(const ReturnProcess& process, const ConvolutionFilter& filter, const std::vector<int>& n_grid,
                     Innovation law, std::size_t draws, std::uint64_t seed, std::ostream& out) {
  const auto pts = convergence_demo(process, filter, n_grid, law, draws, seed);
  out << "n,correlation,ks_distance\n";
  for (const auto& p : pts) out << p.n << ',' << f17(p.correlation) << ',' << f17(p.distance) << '\n';
}

json cmd_stderr(double rho_hat, long t, std::optional<double> sr_hat, std::optional<double> skewness,
                std::optional<double> kurtosis, const std::vector<double>& levels) {
  const ShapeStats plug = dimensionless_stats(rho_hat);
  json out;
  out["rho_hat"] = rho_hat;
  out["t"] = t;
  out["sharpe"] = to_json(sharpe_stderr_report(rho_hat, sr_hat.value_or(plug.sharpe), skewness.value_or(plug.skewness),
                                               kurtosis.value_or(plug.kurtosis), t, levels));
  if (std::abs(plug.sharpe) < std::sqrt(0.5)) out["sharpe"]["stderr_implied_sr_form"] = stderr_sharpe_implied_sr(plug.sharpe, t);
  if (t >= 4) {
    out["skewness"] = to_json(skewness_stderr_report(rho_hat, t, levels));
    out["kurtosis"] = to_json(kurtosis_stderr_report(rho_hat, t, levels));
  }
  return out;
}

void cmd_stderr_table(long t, std::ostream& out) {
  out << "t,rho,sharpe,stderr_implied,stderr_lo,stderr_mertens,stderr_skew_implied,stderr_skew_gaussian,"
         "stderr_kurt_implied,stderr_kurt_gaussian\n";
  const GaussianBaseline g = stderr_gaussian_baseline(t);
  for (int i = -99; i <= 99; ++i) {
    const double rho = i / 100.0;
    const ShapeStats s = dimensionless_stats(rho);
    out << t << ',' << f17(rho) << ',' << f17(s.sharpe) << ',' << f17(stderr_sharpe_implied(rho, t)) << ','
        << f17(stderr_sharpe_lo(s.sharpe, t)) << ',' << f17(stderr_sharpe_mertens(s.sharpe, s.skewness, s.kurtosis, t))
        << ',' << f17(stderr_skew_implied(rho, t)) << ',' << f17(g.skew) << ',' << f17(stderr_kurt_implied(rho, t)) << ','
        << f17(g.kurt) << '\n';
  }
}

void cmd_report_figures(const std::string& id, std::ostream& out) {
  if (id == "moments-vs-rho") {
    out << "rho,sharpe,skewness,kurtosis\n";
    for (int i = -100; i <= 100; ++i) {
      const double rho = i / 100.0;
      const ShapeStats s = dimensionless_stats(rho);
      out << f17(rho) << ',' << f17(s.sharpe) << ',' << f17(s.skewness) << ',' << f17(s.kurtosis) << '\n';
    }
  } else if (id == "stderr-compare") {
    cmd_stderr_table(252, out);
  } else if (id == "density-grid") {
    // Midpoint grid so s = 0, where the density is infinite, is never hit.
    out << "rho,s,pdf\n";
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8}) {
      const ProductDensity d = ProductDensity::unit_variance(rho);
      for (int i = 0; i < 1000; ++i) {
        const double s = -5.0 + (i + 0.5) / 100.0;
        out << f17(rho) << ',' << f17(s) << ',' << f17(product_pdf(s, d)) << '\n';
      }
    }
  } else if (id == "ci-tables") {
    out << "t,rho,sharpe,stderr_implied,stderr_lo,stderr_mertens,exact_lo_95,exact_hi_95\n";
    for (long t : {252L, 756L, 2520L}) {
      for (int i = 0; i <= 9; ++i) {
        const double rho = i / 10.0;
        const ShapeStats s = dimensionless_stats(rho);
        const auto [lo, hi] = exact_sharpe_interval(rho, t, 0.95);
        out << t << ',' << f17(rho) << ',' << f17(s.sharpe) << ',' << f17(stderr_sharpe_implied(rho, t)) << ','
            << f17(stderr_sharpe_lo(s.sharpe, t)) << ','
            << f17(stderr_sharpe_mertens(s.sharpe, s.skewness, s.kurtosis, t)) << ',' << f17(lo) << ',' << f17(hi) << '\n';
      }
    }
  } else {
    fail(ErrorKind::validation, "unknown figure id '" + id + "' (moments-vs-rho, stderr-compare, density-grid, ci-tables)");
  }
}

}  // namespace dynstrat
