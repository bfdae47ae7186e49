#include "dynstrat/serialization.hpp"

#include <cmath>
#include <fstream>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  const json& v = j.at(key);
  require(v.is_array(), ErrorKind::validation, std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    require(x.is_number(), ErrorKind::validation, std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_number(), ErrorKind::validation, std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
  require(j.contains(key), ErrorKind::validation, std::string("filter spec is missing '") + key + "'");
  require(j.at(key).is_number_integer(), ErrorKind::validation, std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

// NaN and infinities become null, which nlohmann would do anyway; kept explicit.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

ReturnProcess process_from_json(const json& j) {
  require(j.is_object(), ErrorKind::validation, "process spec must be a JSON object");
  const double sigma = number(j, "sigma", 1.0);
  auto ar = number_list(j, "ar");
  auto ma = number_list(j, "ma");
  std::string kind = j.value("kind", std::string());
  if (kind.empty()) kind = ar.empty() ? (ma.empty() ? "white_noise" : "ma") : (ma.empty() ? "ar" : "arma");
  if (kind == "white_noise" || kind == "white-noise" || kind == "wn") {
    require(ar.empty() && ma.empty(), ErrorKind::validation, "white noise takes no coefficients");
    return ReturnProcess::white_noise(sigma);
  }
  if (kind == "ar") {
    require(ma.empty(), ErrorKind::validation, "AR process takes no MA coefficients");
    return ReturnProcess::ar(sigma, std::move(ar));
  }
  if (kind == "ma") {
    require(ar.empty(), ErrorKind::validation, "MA process takes no AR coefficients");
    return ReturnProcess::ma(sigma, std::move(ma));
  }
  if (kind == "arma") return ReturnProcess::arma(sigma, std::move(ar), std::move(ma));
  fail(ErrorKind::validation, "unknown process kind '" + kind + "'");
}

json process_to_json(const ReturnProcess& p) {
  return {{"kind", to_string(p.kind())}, {"sigma", p.sigma()}, {"ar", p.ar_coeffs()}, {"ma", p.ma_coeffs()}};
}

FilterSpec filter_spec_from_json(const json& j) {
  require(j.is_object(), ErrorKind::validation, "filter spec must be a JSON object");
  require(j.contains("kind") && j.at("kind").is_string(), ErrorKind::validation, "filter spec needs a string 'kind'");
  FilterSpec s;
  s.kind = filter_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("k")) {
    const json& k = j.at("k");
    if (k.is_string()) {
      require(k.get<std::string>() == "auto", ErrorKind::validation, "'k' must be an integer or \"auto\"");
    } else {
      require(k.is_number_integer() && k.get<long>() >= 1, ErrorKind::validation, "'k' must be a positive integer");
      s.truncation = k.get<std::size_t>();
    }
  }
  switch (s.kind) {
    case FilterKind::sma:
    case FilterKind::triangular: s.window = integer(j, "t"); break;
    case FilterKind::sma_difference:
      s.window_fast = integer(j, "t1");
      s.window_slow = integer(j, "t2");
      break;
    case FilterKind::ewma: s.lambda = number(j, "lambda", NAN); break;
    case FilterKind::ewma_difference:
      s.lambda_fast = number(j, "lambda1", NAN);
      s.lambda_slow = number(j, "lambda2", NAN);
      break;
    case FilterKind::arma_forecast:
      s.ar = number_list(j, "ar");
      s.ma = number_list(j, "ma");
      break;
    case FilterKind::holt_winters:
      s.alpha = number(j, "alpha", NAN);
      s.beta = number(j, "beta", NAN);
      break;
    case FilterKind::custom: s.coeffs = number_list(j, "coeffs"); break;
  }
  return s;
}

json filter_spec_to_json(const FilterSpec& s) {
  json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case FilterKind::sma:
    case FilterKind::triangular: j["t"] = s.window; break;
    case FilterKind::sma_difference:
      j["t1"] = s.window_fast;
      j["t2"] = s.window_slow;
      break;
    case FilterKind::ewma: j["lambda"] = s.lambda; break;
    case FilterKind::ewma_difference:
      j["lambda1"] = s.lambda_fast;
      j["lambda2"] = s.lambda_slow;
      break;
    case FilterKind::arma_forecast:
      j["ar"] = s.ar;
      j["ma"] = s.ma;
      break;
    case FilterKind::holt_winters:
      j["alpha"] = s.alpha;
      j["beta"] = s.beta;
      break;
    case FilterKind::custom: j["coeffs"] = s.coeffs; break;
  }
  if (s.truncation) j["k"] = *s.truncation;
  else if (s.kind == FilterKind::ewma || s.kind == FilterKind::ewma_difference || s.kind == FilterKind::arma_forecast ||
           s.kind == FilterKind::holt_winters)
    j["k"] = "auto";
  return j;
}

json filter_to_json(const ConvolutionFilter& f) {
  return {{"label", f.label}, {"k", f.size()}, {"coeffs", f.coeffs}};
}

json to_json(const StrategyStats& s) {
  return {{"mu1", s.mu1}, {"mu2", s.mu2}, {"mu3", s.mu3}, {"mu4", s.mu4}, {"sharpe", s.sharpe},
          {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"kurtosis_convention", "pearson"}};
}

json to_json(const ShapeStats& s) {
  return {{"sharpe", s.sharpe}, {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"kurtosis_convention", "pearson"}};
}

json to_json(const QuadraticFormMoments& q) {
  return {{"mean", q.mean}, {"variance", q.variance}, {"skewness", q.skewness}, {"kurtosis", q.kurtosis},
          {"excess_kurtosis", q.excess_kurtosis}, {"kurtosis_convention", "pearson"}};
}

json to_json(const StderrReport& r) {
  json j{{"statistic", r.statistic}, {"estimate", num(r.estimate)}, {"stderr_implied", num(r.stderr_implied)},
         {"sample_size", r.sample_size}};
  if (r.stderr_lo >= 0) j["stderr_lo"] = r.stderr_lo;
  if (r.stderr_mertens >= 0) j["stderr_mertens"] = r.stderr_mertens;
  if (r.stderr_gaussian >= 0) j["stderr_gaussian"] = r.stderr_gaussian;
  json ci = json::array();
  for (const auto& c : r.confidence_intervals) ci.push_back({{"method", c.method}, {"level", c.level}, {"lo", c.lo}, {"hi", c.hi}});
  j["confidence_intervals"] = ci;
  return j;
}

json to_json(const EmpiricalMoments& m) {
  json j{{"n", m.n},
         {"mean", num(m.mean)},
         {"variance", num(m.variance)},
         {"skewness", num(m.skewness)},
         {"kurtosis", num(m.kurtosis)},
         {"sharpe", num(m.sharpe)},
         {"stderr", {{"mean", num(m.se_mean)}, {"variance", num(m.se_variance)}, {"skewness", num(m.se_skewness)},
                     {"kurtosis", num(m.se_kurtosis)}, {"sharpe", num(m.se_sharpe)}}},
         {"kurtosis_convention", "pearson"}};
  if (!m.flag.empty()) j["flag"] = m.flag;
  return j;
}

json to_json(const CoverageResult& c) {
  return {{"method", to_string(c.method)}, {"rho", c.rho},         {"t", c.t},
          {"n_trials", c.n_trials},        {"level", c.level},     {"true_value", c.true_value},
          {"coverage", c.coverage},        {"coverage_stderr", c.coverage_stderr}};
}

json to_json(const CcaResult& c) {
  json pairs = json::array();
  for (std::size_t i = 0; i < c.correlations.size(); ++i) {
    const auto& w = c.return_weights[i];
    const auto& v = c.signal_weights[i];
    pairs.push_back({{"correlation", c.correlations[i]},
                     {"strategy_sharpe", c.strategy_sharpes[i]},
                     {"return_weights", std::vector<double>(w.data(), w.data() + w.size())},
                     {"signal_weights", std::vector<double>(v.data(), v.data() + v.size())}});
  }
  return {{"canonical_pairs", pairs}};
}

json to_json(const OptimizeResult& r) {
  json j{{"filter", filter_to_json(r.filter)}, {"utility", r.utility},     {"correlation", r.correlation},
         {"converged", r.converged},           {"iterations", r.iterations}, {"best_start", r.best_start},
         {"gradient_check", r.gradient_check}, {"start_utilities", r.start_utilities}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open JSON file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, "invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace dynstrat
