#pragma once

// Simulation oracle for every closed form in the library.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dynstrat/process.hpp"
#include "dynstrat/signals.hpp"

namespace dynstrat {

struct SimulationPlan {
  ReturnProcess process = ReturnProcess::white_noise(1.0);
  ConvolutionFilter filter{{1.0}, "identity"};
  std::size_t path_length = 0;  // returns per path, including the K warm-up
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StrategyPath {
  std::vector<double> returns;   // R_t for t = K .. path_length-1
  std::vector<double> signals;   // X_t from R_{t-1} .. R_{t-K}
  std::vector<double> strategy;  // S_t = X_t R_t
};

// Path p draws from Rng stream p, so results are independent of scheduling.
std::vector<StrategyPath> simulate_strategy_paths(const SimulationPlan& plan);
std::vector<std::vector<double>> simulate_strategy(const SimulationPlan& plan);

// Delete-one-block jackknife. block_sums is B rows of per-block additive
// sums; stat maps a summed row to the statistic.
struct JackknifeEstimate {
  double value = 0, se = 0;
};
JackknifeEstimate block_jackknife(const std::vector<std::vector<double>>& block_sums,
                                  const std::function<double(const std::vector<double>&)>& stat);

struct EmpiricalMoments {
  std::size_t n = 0;
  double mean = 0, variance = 0, skewness = 0, kurtosis = 0, sharpe = 0;
  double se_mean = 0, se_variance = 0, se_skewness = 0, se_kurtosis = 0, se_sharpe = 0;
  std::string flag;  // non-empty when a statistic is undefined (e.g. zero variance)
};

// Bias-uncorrected central moments, Pearson kurtosis, block jackknife
// standard errors (block 100 by default).
EmpiricalMoments empirical_moments(std::span<const double> samples, std::size_t block = 100);

// Sample correlation with block-jackknife stderr.
JackknifeEstimate empirical_correlation(std::span<const double> x, std::span<const double> y, std::size_t block = 100);

// Products x * y of iid standard bivariate normal pairs with correlation rho.
std::vector<double> simulate_product_pairs(double rho, std::size_t draws, std::uint64_t seed);
// Sum over n independent such pairs per draw.
std::vector<double> simulate_multi_asset(int n, double rho, std::size_t draws, std::uint64_t seed);

enum class CoverageMethod { implied_exact, implied_gaussian, lo, mertens, gaussian_skew, gaussian_kurt, implied_skew, implied_kurt };
const char* to_string(CoverageMethod m);
CoverageMethod coverage_method_from_string(const std::string& name);

struct CoverageResult {
  CoverageMethod method = CoverageMethod::implied_exact;
  double rho = 0;
  long t = 0;
  std::size_t n_trials = 0;
  double level = 0.95;
  double true_value = 0;
  double coverage = 0;
  double coverage_stderr = 0;
};

// Each trial draws T iid bivariate normal pairs and checks whether the
// nominal interval for SR (or skewness / kurtosis) contains the truth.
CoverageResult coverage_experiment(double rho, long t, std::size_t n_trials, CoverageMethod method,
                                   std::uint64_t seed, double level = 0.95);

// Standard deviation of the plug-in SR over n_boot pair resamples of one
// simulated sample of size T.
double bootstrap_sharpe_sd(double rho, long t, std::size_t n_boot, std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct ConvergencePoint {
  int n = 0;
  double correlation = 0;  // of the truncated pair
  double distance = 0;     // KS distance to the Gaussian-pair product
};

// R_t = sum_{j<N} b_j e_{t-j} and X_t = sum_{1<=j<=N} h_j e_{t-j} with b the
// Wold weights and h = phi * b, both scaled to unit variance; compares the
// law of X_t R_t under the given innovations with the product of a matched
// Gaussian pair.
std::vector<ConvergencePoint> convergence_demo(const ReturnProcess& process, const ConvolutionFilter& filter,
                                               const std::vector<int>& n_grid, Innovation law, std::size_t draws,
                                               std::uint64_t seed);

}  // namespace dynstrat
