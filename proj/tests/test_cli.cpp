#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dynstrat/process.hpp"
#include "dynstrat/returns_io.hpp"
#include "dynstrat/serialization.hpp"

namespace fs = std::filesystem;
using dynstrat::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("dynstrat_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// env is a prefix of VAR=value assignments.
Run run(const std::string& args, const std::string& env = "") {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = "env -u DYNSTRAT_T -u DYNSTRAT_CONFIG " + env + " '" DYNSTRAT_CLI_PATH "' " + args + " 2>'" +
                          err.string() + "'";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

fs::path simulated_returns() {
  const fs::path p = scratch() / "ar.csv";
  std::ofstream out(p);
  dynstrat::write_returns_csv(out, dynstrat::simulate_returns(dynstrat::ReturnProcess::ar(0.01, {0.2}), 4000, 5));
  return p;
}

json error_of(const Run& r) {
  const json j = json::parse(r.err);
  REQUIRE(j.contains("error"));
  return j["error"];
}

}  // namespace

TEST_CASE("analyze succeeds and emits JSON") {
  const auto csv = simulated_returns();
  auto r = run("analyze --returns '" + csv.string() + "' --filter '{\"kind\":\"ewma\",\"lambda\":0.8}'");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["sample_size"].get<long>() > 3000);
  CHECK(j.contains("rho_hat"));
}

TEST_CASE("exit codes and JSON errors") {
  auto usage = run("analyze --no-such-flag 1");
  CHECK(usage.code == 2);
  CHECK(error_of(usage)["kind"] == "usage");

  auto none = run("");
  CHECK(none.code == 2);

  const auto bad = write_file("bad.csv", "date,return\n2020-01-01,0.1\n2020-01-02,oops\n");
  auto parse = run("analyze --returns '" + bad.string() + "' --filter '{\"kind\":\"sma\",\"t\":2}'");
  CHECK(parse.code == 3);
  CHECK(error_of(parse)["kind"] == "parse");
  CHECK(error_of(parse)["line"] == 3);

  const auto flat = write_file("flat.csv", "date,return\n2020-01-01,0.1\n2020-01-02,0.1\n2020-01-03,0.1\n2020-01-04,0.1\n"
                                           "2020-01-05,0.1\n2020-01-06,0.1\n");
  auto degenerate = run("analyze --returns '" + flat.string() + "' --filter '{\"kind\":\"sma\",\"t\":2}'");
  CHECK(degenerate.code == 3);

  auto validation = run("stderr --rho-hat 1.5 --t 100");
  CHECK(validation.code == 2);
  CHECK(error_of(validation)["kind"] == "validation");

  auto domain = run("stderr --rho-hat 0.3 --t 100 --sr-hat 1.0 --skewness 5 --kurtosis 3");
  CHECK(domain.code == 4);
  CHECK(error_of(domain)["exit_code"] == 4);

  auto figure = run("figures --id nope");
  CHECK(figure.code == 2);
}

TEST_CASE("flags beat environment beats config file") {
  const auto cfg = write_file("cfg.json", R"({"stderr": {"t": 100, "rho_hat": 0.2}})");
  const std::string base = "stderr --config '" + cfg.string() + "'";
  CHECK(json::parse(run(base).out)["t"] == 100);
  CHECK(json::parse(run(base, "DYNSTRAT_T=200").out)["t"] == 200);
  CHECK(json::parse(run(base + " --t 300", "DYNSTRAT_T=200").out)["t"] == 300);
  CHECK(json::parse(run("stderr --t 50", "DYNSTRAT_CONFIG='" + cfg.string() + "'").out)["rho_hat"] == 0.2);
  const auto flat = write_file("flat_cfg.json", R"({"t": 80, "rho-hat": 0.1})");
  CHECK(json::parse(run("stderr --config '" + flat.string() + "'").out)["t"] == 80);
}

TEST_CASE("CSV outputs and determinism") {
  auto a = run("figures --id moments-vs-rho");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("rho,sharpe,skewness,kurtosis\n", 0) == 0);
  auto d = run("density --rho 0,0.5 --s-min -2 --s-max 2 --points 5");
  CHECK(d.code == 0);
  CHECK(d.out.rfind("rho,s,pdf\n", 0) == 0);

  const std::string sim = "simulate --experiment returns --process '{\"ar\":[0.3]}' --length 50 --seed 9";
  auto s1 = run(sim), s2 = run(sim);
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  CHECK(run(sim + " --seed 10").out != s1.out);

  const fs::path out = scratch() / "out.csv";
  CHECK(run(sim + " -o '" + out.string() + "'").code == 0);
  CHECK(slurp(out) == s1.out);

  const auto csv = simulated_returns();
  auto sweep = run("sweep --returns '" + csv.string() + "' --family ewma --grid 0.2,0.5,0.9");
  CHECK(sweep.code == 0);
  CHECK(sweep.out.rfind("lambda,mse,correlation,sharpe\n", 0) == 0);
  auto bad_grid = run("sweep --returns '" + csv.string() + "' --family ewma --grid 1.5");
  CHECK(bad_grid.code == 2);
}

TEST_CASE("remaining subcommands run") {
  const auto csv = simulated_returns();
  CHECK(run("fit --returns '" + csv.string() + "' --method tls --lags 2").code == 0);
  auto opt = run("optimize --process '{\"ar\":[0.4]}' --k 3 --gamma 1 --nu 0.01");
  CHECK(opt.code == 0);
  CHECK(json::parse(opt.out)["result"].contains("filter"));
  auto cov = run("simulate --experiment coverage --rho 0.3 --t 100 --trials 1000 --seed 1");
  CHECK(cov.code == 0);
  CHECK(json::parse(cov.out).contains("coverage"));
  auto table = run("stderr --table --t 252");
  CHECK(table.code == 0);
  auto help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("DYNSTRAT_") != std::string::npos);
}
