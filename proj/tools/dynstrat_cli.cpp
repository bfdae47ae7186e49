// dynstrat command-line tool.
//
// Precedence for every option: command-line flag > DYNSTRAT_<NAME>
// environment variable > JSON config file (--config or DYNSTRAT_CONFIG).
// Exit codes: 0 ok, 2 usage, 3 data, 4 numeric.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dynstrat/commands.hpp"
#include "dynstrat/errors.hpp"

using namespace dynstrat;

namespace {

struct Options {
  std::string config, output;
  // shared
  std::string returns, asset, filter, process;
  std::uint64_t seed = 1;
  // analyze
  double periods_per_year = 252.0;
  // sweep
  std::string family = "ewma";
  std::vector<double> grid, grid2;
  // fit
  std::string method = "ols";
  int lags = 5;
  bool standardize = false;
  // optimize
  int k = 10, starts = 8;
  double gamma = 1.0, nu = 0.0;
  // density
  std::vector<double> rhos{0.0, 0.2, 0.4, 0.6, 0.8};
  double s_min = -5.0, s_max = 5.0, sigma_r = 1.0, sigma_x = 1.0;
  int points = 1001;
  bool unit_variance = false;
  // simulate
  std::string experiment = "returns", coverage_method = "implied_exact", innovation = "uniform";
  std::size_t length = 1000, paths = 1, trials = 10000, draws = 1000000;
  double rho = 0.3, level = 0.95;
  long t = 1000;
  std::vector<int> n_grid{2, 8, 32, 128, 512};
  // stderr
  double rho_hat = 0.0;
  std::optional<double> sr_hat, skewness, kurtosis;
  std::vector<double> levels{0.90, 0.95, 0.99};
  bool table = false;
  // figures
  std::string figure_id;
};

std::string env_name(const std::string& long_name) {
  std::string e = "DYNSTRAT_";
  for (char c : long_name) e += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return e;
}

template <class T>
CLI::Option* opt(CLI::App* sub, const std::string& name, T& target, const std::string& help) {
  return sub->add_option("--" + name, target, help)->envname(env_name(name));
}

CLI::Option* flag(CLI::App* sub, const std::string& name, bool& target, const std::string& help) {
  return sub->add_flag("--" + name, target, help)->envname(env_name(name));
}

void build(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.footer(
      "Option precedence: flags > DYNSTRAT_<OPTION> environment variables > JSON config file.\n"
      "Exit codes: 0 ok, 2 usage, 3 data, 4 numeric. Errors are printed to stderr as JSON.");
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "JSON config file (flat or keyed by subcommand)")->envname("DYNSTRAT_CONFIG");
    s->add_option("-o,--output", o.output, "write the result here instead of stdout")->envname("DYNSTRAT_OUTPUT");
  };

  auto* a = app.add_subcommand("analyze", "strategy report for a returns CSV and a filter spec");
  common(a);
  opt(a, "returns", o.returns, "returns CSV (date,return[,asset])");
  opt(a, "filter", o.filter, "filter spec: JSON file or inline JSON");
  opt(a, "asset", o.asset, "asset id for multi-asset files");
  opt(a, "periods-per-year", o.periods_per_year, "annualization factor");

  auto* sw = app.add_subcommand("sweep", "MSE / correlation / Sharpe over a filter-parameter grid (CSV)");
  common(sw);
  opt(sw, "returns", o.returns, "returns CSV");
  opt(sw, "family", o.family, "ewma | sma | holt_winters");
  opt(sw, "grid", o.grid, "comma-separated grid (lambda, window or alpha)")->delimiter(',');
  opt(sw, "grid2", o.grid2, "second grid (Holt-Winters beta)")->delimiter(',');
  opt(sw, "asset", o.asset, "asset id for multi-asset files");

  auto* f = app.add_subcommand("fit", "OLS / TLS / CCA fit on lagged returns");
  common(f);
  opt(f, "returns", o.returns, "returns CSV");
  opt(f, "method", o.method, "ols | tls | cca");
  opt(f, "lags", o.lags, "number of lagged returns used as features");
  flag(f, "standardize", o.standardize, "center and scale features and target");
  opt(f, "asset", o.asset, "asset id for multi-asset files (ols, tls)");

  auto* op = app.add_subcommand("optimize", "maximize the cost-aware utility over length-k filters");
  common(op);
  opt(op, "process", o.process, "process spec: JSON file or inline JSON");
  opt(op, "k", o.k, "filter length");
  opt(op, "gamma", o.gamma, "risk aversion");
  opt(op, "nu", o.nu, "proportional cost");
  opt(op, "seed", o.seed, "seed for random starts");
  opt(op, "starts", o.starts, "number of optimizer starts");

  auto* d = app.add_subcommand("density", "product-normal density grid (CSV)");
  common(d);
  opt(d, "rho", o.rhos, "comma-separated correlations")->delimiter(',');
  opt(d, "s-min", o.s_min, "grid start");
  opt(d, "s-max", o.s_max, "grid end");
  opt(d, "points", o.points, "grid points");
  flag(d, "unit-variance", o.unit_variance, "rescale each curve to unit variance");
  opt(d, "sigma-r", o.sigma_r, "return volatility");
  opt(d, "sigma-x", o.sigma_x, "signal volatility");

  auto* si = app.add_subcommand("simulate", "simulation experiments");
  common(si);
  opt(si, "experiment", o.experiment, "returns (CSV) | moments (JSON) | coverage (JSON) | convergence (CSV)");
  opt(si, "process", o.process, "process spec: JSON file or inline JSON");
  opt(si, "filter", o.filter, "filter spec: JSON file or inline JSON");
  opt(si, "length", o.length, "returns per path");
  opt(si, "paths", o.paths, "independent paths (moments)");
  opt(si, "seed", o.seed, "random seed");
  opt(si, "rho", o.rho, "pair correlation (coverage)");
  opt(si, "t", o.t, "sample size per trial (coverage)");
  opt(si, "trials", o.trials, "trials (coverage)");
  opt(si, "method", o.coverage_method,
      "implied_exact | implied_gaussian | lo | mertens | gaussian_skew | gaussian_kurt | implied_skew | implied_kurt");
  opt(si, "level", o.level, "nominal coverage level");
  opt(si, "n-grid", o.n_grid, "truncation lengths (convergence)")->delimiter(',');
  opt(si, "innovation", o.innovation, "gaussian | uniform | centered_exponential (convergence)");
  opt(si, "draws", o.draws, "draws per truncation length (convergence)");

  auto* se = app.add_subcommand("stderr", "standard errors and confidence intervals");
  common(se);
  opt(se, "rho-hat", o.rho_hat, "estimated signal/return correlation");
  opt(se, "t", o.t, "sample size");
  opt(se, "sr-hat", o.sr_hat, "empirical Sharpe for Lo / Mertens (default: plug-in)");
  opt(se, "skewness", o.skewness, "skewness for Mertens (default: plug-in)");
  opt(se, "kurtosis", o.kurtosis, "Pearson kurtosis for Mertens (default: plug-in)");
  opt(se, "levels", o.levels, "confidence levels")->delimiter(',');
  flag(se, "table", o.table, "CSV comparison over a correlation grid at this T instead");

  auto* fg = app.add_subcommand("figures", "plot-ready CSV from the closed forms");
  common(fg);
  opt(fg, "id", o.figure_id, "moments-vs-rho | stderr-compare | density-grid | ci-tables");
}

json load_spec(const std::string& text, const char* what) {
  if (text.empty()) fail(ErrorKind::validation, std::string("--") + what + " is required");
  const auto b = text.find_first_not_of(" \t\n");
  if (b != std::string::npos && text[b] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::validation, std::string("invalid inline JSON for --") + what + ": " + e.what());
    }
  }
  return read_json_file(text);
}

Innovation innovation_from_string(const std::string& s) {
  if (s == "gaussian") return Innovation::gaussian;
  if (s == "uniform") return Innovation::uniform;
  if (s == "centered_exponential" || s == "exponential") return Innovation::centered_exponential;
  fail(ErrorKind::validation, "unknown innovation law '" + s + "'");
}

std::string require_path(const std::string& v, const char* what) {
  if (v.empty()) fail(ErrorKind::validation, std::string("--") + what + " is required");
  return v;
}

void run(const CLI::App& app, const Options& o, std::ostream& out) {
  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "analyze") {
    const ReturnsFile file = read_returns_file(require_path(o.returns, "returns"));
    out << cmd_analyze(file.series(o.asset), filter_spec_from_json(load_spec(o.filter, "filter")), o.periods_per_year).dump(2)
        << '\n';
  } else if (name == "sweep") {
    const ReturnsFile file = read_returns_file(require_path(o.returns, "returns"));
    cmd_sweep(file.series(o.asset), sweep_family_from_string(o.family), o.grid, o.grid2, out);
  } else if (name == "fit") {
    const ReturnsFile file = read_returns_file(require_path(o.returns, "returns"));
    out << cmd_fit(file, fit_kind_from_string(o.method), o.lags, o.standardize, o.asset).dump(2) << '\n';
  } else if (name == "optimize") {
    const CostSpec cost{o.gamma, o.nu};
    out << cmd_optimize(process_from_json(load_spec(o.process, "process")), o.k, cost, o.seed, o.starts).dump(2) << '\n';
  } else if (name == "density") {
    cmd_density(o.rhos, o.s_min, o.s_max, o.points, o.unit_variance, o.sigma_r, o.sigma_x, out);
  } else if (name == "simulate") {
    if (o.experiment == "returns") {
      cmd_simulate_returns(process_from_json(load_spec(o.process, "process")), o.length, o.seed, out);
    } else if (o.experiment == "moments") {
      SimulationPlan plan;
      plan.process = process_from_json(load_spec(o.process, "process"));
      plan.filter = build_filter(filter_spec_from_json(load_spec(o.filter, "filter")));
      plan.path_length = o.length;
      plan.n_paths = o.paths;
      plan.seed = o.seed;
      out << cmd_simulate_report(plan).dump(2) << '\n';
    } else if (o.experiment == "coverage") {
      out << cmd_coverage(o.rho, o.t, o.trials, coverage_method_from_string(o.coverage_method), o.seed, o.level).dump(2)
          << '\n';
    } else if (o.experiment == "convergence") {
      cmd_convergence(process_from_json(load_spec(o.process, "process")),
                      build_filter(filter_spec_from_json(load_spec(o.filter, "filter"))), o.n_grid,
                      innovation_from_string(o.innovation), o.draws, o.seed, out);
    } else {
      fail(ErrorKind::validation, "unknown experiment '" + o.experiment + "'");
    }
  } else if (name == "stderr") {
    if (o.table) cmd_stderr_table(o.t, out);
    else out << cmd_stderr(o.rho_hat, o.t, o.sr_hat, o.skewness, o.kurtosis, o.levels).dump(2) << '\n';
  } else if (name == "figures") {
    cmd_report_figures(require_path(o.figure_id, "id"), out);
  }
}

// Config entries for options that neither a flag nor the environment set.
std::vector<std::string> config_arguments(const CLI::App& app, const std::string& path) {
  const json cfg = read_json_file(path);
  if (!cfg.is_object()) fail(ErrorKind::validation, "config file must hold a JSON object");
  const CLI::App* sub = app.get_subcommands().front();
  std::vector<std::string> extra;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string lname = opt->get_lnames().empty() ? std::string() : opt->get_lnames().front();
    if (lname.empty() || lname == "config" || lname == "help" || opt->count() > 0) continue;
    std::string under = lname;
    std::replace(under.begin(), under.end(), '-', '_');
    const json* value = nullptr;
    for (const json* scope : {cfg.contains(sub->get_name()) ? &cfg.at(sub->get_name()) : nullptr, &cfg}) {
      if (!scope || !scope->is_object()) continue;
      for (const auto& key : {lname, under})
        if (!value && scope->contains(key) && !scope->at(key).is_object()) value = &scope->at(key);
    }
    if (!value) continue;
    if (value->is_boolean()) {
      if (value->get<bool>()) extra.push_back("--" + lname);
      continue;
    }
    std::string text;
    if (value->is_array()) {
      for (const auto& v : *value) {
        if (!text.empty()) text += ',';
        text += v.is_string() ? v.get<std::string>() : v.dump();
      }
    } else if (value->is_string()) {
      text = value->get<std::string>();
    } else {
      text = value->dump();
    }
    extra.push_back("--" + lname);
    extra.push_back(text);
  }
  return extra;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::parse:
    case ErrorKind::sample_size:
    case ErrorKind::degenerate: return 3;
    case ErrorKind::domain:
    case ErrorKind::singular:
    case ErrorKind::regularization_needed:
    case ErrorKind::numeric: return 4;
  }
  return 4;
}

int report(const std::string& kind, const std::string& message, int code, long line = 0) {
  json e{{"kind", kind}, {"message", message}, {"exit_code", code}};
  if (line > 0) e["line"] = line;
  std::cerr << json{{"error", e}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Options o;
  CLI::App app{"Closed-form analytics for linear trading strategies on Gaussian returns", "dynstrat"};
  build(app, o);
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    const std::string config = app.get_subcommands().front()->get_option("--config")->as<std::string>();
    if (!config.empty()) {
      const auto extra = config_arguments(app, config);
      if (!extra.empty()) {
        std::vector<std::string> full = args;
        full.insert(full.end(), extra.begin(), extra.end());
        o = Options{};
        CLI::App again{"Closed-form analytics for linear trading strategies on Gaussian returns", "dynstrat"};
        build(again, o);
        std::vector<std::string> rev2(full.rbegin(), full.rend());
        again.parse(rev2);
        return [&] {
          std::ofstream file;
          if (!o.output.empty()) {
            file.open(o.output);
            if (!file) fail(ErrorKind::parse, "cannot open output file '" + o.output + "'");
          }
          run(again, o, o.output.empty() ? std::cout : file);
          return 0;
        }();
      }
    }
    std::ofstream file;
    if (!o.output.empty()) {
      file.open(o.output);
      if (!file) fail(ErrorKind::parse, "cannot open output file '" + o.output + "'");
    }
    run(app, o, o.output.empty() ? std::cout : file);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  } catch (const dynstrat::ParseError& e) {
    return report(to_string(e.kind()), e.what(), 3, e.line());
  } catch (const dynstrat::Error& e) {
    return report(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const json::exception& e) {
    return report("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return report("numeric", e.what(), 4);
  }
}
