#pragma once

// Sampling error of Sharpe, skewness and kurtosis estimates for linear
// Gaussian strategies, plus the exact law of the sample correlation.

#include <string>
#include <utility>
#include <vector>

namespace dynstrat {

// Delta method on rho_hat with se(rho_hat) = sqrt((1 - rho_hat^2) / (T - 2)).
double stderr_sharpe_implied(double rho_hat, long t);
// Same quantity written in terms of SR_hat; requires |SR_hat| < sqrt(2)/2.
double stderr_sharpe_implied_sr(double sr_hat, long t);
double stderr_sharpe_lo(double sr_hat, long t);
double stderr_sharpe_mertens(double sr_hat, double skewness, double kurtosis, long t);
// Magnitudes.
double stderr_skew_implied(double rho_hat, long t);
double stderr_kurt_implied(double rho_hat, long t);

struct GaussianBaseline {
  double skew = 0, kurt = 0;
};
// Small-sample stderrs of skewness and kurtosis under iid normality.
GaussianBaseline stderr_gaussian_baseline(long t);

// Density of the sample correlation of T bivariate normal pairs with true
// correlation rho. Throws a numeric error if the quadrature misses 1e-10.
double pearson_sample_density(double rho, double rho_hat, long t);
double log_pearson_sample_density(double rho, double rho_hat, long t);

// Quantiles of rho_hat under true correlation rho, from the tabulated density.
std::vector<double> pearson_sample_quantiles(double rho, long t, const std::vector<double>& probs);

// Exact interval for rho from the rho_hat law at rho = rho_hat, reflected
// around the estimate (basic pivot) and clipped to [-1, 1].
std::pair<double, double> exact_rho_interval(double rho_hat, long t, double level);
// Same interval pushed through SR = rho / sqrt(1 + rho^2).
std::pair<double, double> exact_sharpe_interval(double rho_hat, long t, double level);

struct ConfidenceInterval {
  std::string method;
  double level = 0, lo = 0, hi = 0;
};

struct StderrReport {
  std::string statistic;  // sharpe, skewness, kurtosis
  double estimate = 0;
  double stderr_implied = 0;
  double stderr_lo = -1;        // sharpe only, else -1
  double stderr_mertens = -1;   // sharpe only, else -1
  double stderr_gaussian = -1;  // skewness / kurtosis only, else -1
  long sample_size = 0;
  std::vector<ConfidenceInterval> confidence_intervals;
};

inline const std::vector<double> kDefaultLevels{0.90, 0.95, 0.99};

// estimate is the plug-in SR from rho_hat; Lo and Mertens use sr_hat and the
// supplied higher moments.
StderrReport sharpe_stderr_report(double rho_hat, double sr_hat, double skewness, double kurtosis, long t,
                                  const std::vector<double>& levels = kDefaultLevels);
StderrReport skewness_stderr_report(double rho_hat, long t, const std::vector<double>& levels = kDefaultLevels);
StderrReport kurtosis_stderr_report(double rho_hat, long t, const std::vector<double>& levels = kDefaultLevels);

// Two-sided standard normal critical value for the given level.
double normal_critical_value(double level);

}  // namespace dynstrat
