#pragma once

// Closed-form moments of S = X * R for jointly Gaussian (X, R).

#include <Eigen/Dense>
#include <array>

#include "dynstrat/process.hpp"
#include "dynstrat/signals.hpp"

namespace dynstrat {

struct JointGaussianSpec {
  double sigma_r = 1.0;
  double sigma_x = 1.0;
  double rho = 0.0;
  double mu_r = 0.0;
  double mu_x = 0.0;
};

// mu1 is the mean, mu2..mu4 are central moments. Kurtosis is Pearson (mu4/mu2^2).
struct StrategyStats {
  double mu1 = 0, mu2 = 0, mu3 = 0, mu4 = 0;
  double sharpe = 0, skewness = 0, kurtosis = 0;
};

struct ShapeStats {
  double sharpe = 0, skewness = 0, kurtosis = 0;
};

StrategyStats product_moments(const JointGaussianSpec& spec);
ShapeStats dimensionless_stats(double rho);
double annualize_sharpe(double sr, double periods_per_year);

// Sharpe and skewness with nonzero signal and return means, in units of the
// per-variable Sharpe ratios. kurtosis is left at 0 (not provided).
ShapeStats nonzero_mean_stats(double sr_r, double sr_x, double rho);

// Sum of n independent unit-variance pairs with common correlation rho.
struct MultiAssetStats {
  double mean = 0, variance = 0, third_central = 0, sharpe = 0, skewness = 0;
};
MultiAssetStats multi_asset_stats(int n, double rho);

// Raw moment E[(sum x_i y_i)^order] from the moment generating function
// (1 - 2 t rho - t^2 (1 - rho^2))^(-n/2), expanded as a power series.
double mgf_moments_oracle(int n, double rho, int order);
// Mean followed by central moments of order 2..4 from the same expansion.
std::array<double, 4> mgf_central_moments(int n, double rho);

// Moments of r' A r with r ~ N(0, V).
struct QuadraticFormMoments {
  double mean = 0, variance = 0, skewness = 0;
  double kurtosis = 0;         // Pearson
  double excess_kurtosis = 0;  // 12 tr((AV)^4) / tr((AV)^2)^2
};
QuadraticFormMoments quadratic_form_moments(const Eigen::MatrixXd& a, const Eigen::MatrixXd& v);

// Sharpe ratio of sum_{t=1..T} X_t R_t.
double multiperiod_sharpe(const ConvolutionFilter& filter, const ReturnProcess& process, int horizon);
// Var(sum S_t) / (T sigma_X^2 sigma_R^2).
double multiperiod_variance_factor(const ConvolutionFilter& filter, const ReturnProcess& process, int horizon);

double jb_floor(long n, long k);
double jarque_bera(long n, long k, double skewness, double kurtosis);

}  // namespace dynstrat
