#pragma once

// Stationary zero-mean return models and exact-law simulation.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dynstrat/rng.hpp"

namespace dynstrat {

enum class ProcessKind { white_noise, ar, ma, arma };

const char* to_string(ProcessKind kind);

// Innovation law used by the simulator. Non-Gaussian laws are normalized to
// zero mean and unit variance and exist for the product-of-Gaussians
// convergence experiment.
enum class Innovation { gaussian, uniform, centered_exponential };

double draw_innovation(Rng& rng, Innovation law);

// ACF of ARMA(p, q) with AR polynomial 1 - sum ar_i B^i and MA polynomial
// 1 + sum ma_j B^j, normalized so acf[0] = 1. Throws on unit-root or
// explosive AR parameters.
std::vector<double> arma_acf(std::span<const double> ar, std::span<const double> ma, std::size_t max_lag);

// Same system, unit innovation variance, not normalized.
std::vector<double> arma_autocovariance(std::span<const double> ar, std::span<const double> ma, std::size_t max_lag);

// True when every root of 1 - sum ar_i z^i lies outside the unit circle.
bool ar_stationary(std::span<const double> ar);
// True when every root of 1 + sum ma_j z^j lies outside the unit circle.
bool ma_invertible(std::span<const double> ma);

class ReturnProcess {
 public:
  static ReturnProcess white_noise(double sigma);
  static ReturnProcess ar(double sigma, std::vector<double> ar);
  static ReturnProcess ma(double sigma, std::vector<double> ma);
  static ReturnProcess arma(double sigma, std::vector<double> ar, std::vector<double> ma);

  ProcessKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& ar_coeffs() const { return ar_; }
  const std::vector<double>& ma_coeffs() const { return ma_; }
  std::size_t order() const { return std::max(ar_.size(), ma_.size()); }

  // acf(k) = corr(R_t, R_{t-k}); symmetric in k. The cached table is cut at
  // the first lag beyond which |acf| stays below 1e-14; later lags read 0.
  double acf(long lag) const;
  std::span<const double> acf_table() const { return *acf_; }

  // Wold (MA-infinity) weights psi_0..psi_{n-1} for unit-variance innovations.
  std::vector<double> wold_coefficients(std::size_t n) const;
  // Var(R) for unit-variance innovations.
  double innovation_gain() const { return gamma0_; }

 private:
  ReturnProcess(ProcessKind kind, double sigma, std::vector<double> ar, std::vector<double> ma);

  ProcessKind kind_;
  double sigma_;
  std::vector<double> ar_, ma_;
  double gamma0_ = 1.0;
  std::shared_ptr<const std::vector<double>> acf_;
};

// K x K matrix with entries acf(|i - j|).
Eigen::MatrixXd acf_toeplitz(const ReturnProcess& process, std::size_t k);

// One stationary sample path of the given length. Burn-in of
// max(10 * order, 1000, acf decay length) samples is discarded.
std::vector<double> simulate_returns(const ReturnProcess& process, std::size_t length, std::uint64_t seed,
                                     std::uint64_t stream = 0, Innovation law = Innovation::gaussian);

std::size_t burn_in_length(const ReturnProcess& process);

}  // namespace dynstrat
