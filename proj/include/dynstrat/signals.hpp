#pragma once

// Linear trading signals as causal convolution filters of past returns,
//   X_t = sum_{k=1..K} phi(k) R_{t-k},
// and their joint-Gaussian statistics against the next return R_t.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynstrat/process.hpp"

namespace dynstrat {

// coeffs[0] is the lag-1 weight; there is never a lag-0 term.
struct ConvolutionFilter {
  std::vector<double> coeffs;
  std::string label;

  std::size_t size() const { return coeffs.size(); }
  double lag(std::size_t k) const { return k >= 1 && k <= coeffs.size() ? coeffs[k - 1] : 0.0; }
  double squared_norm() const;
};

enum class FilterKind { sma, ewma, triangular, sma_difference, ewma_difference, arma_forecast, holt_winters, custom };

const char* to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

struct FilterSpec {
  FilterKind kind = FilterKind::sma;
  int window = 0;                         // sma, triangular
  int window_fast = 0, window_slow = 0;   // sma_difference, fast < slow
  double lambda = 0.0;                    // ewma
  double lambda_fast = 0.0, lambda_slow = 0.0;  // ewma_difference
  std::optional<std::size_t> truncation;  // K; empty selects the automatic length
  std::vector<double> ar, ma;             // arma_forecast
  double alpha = 0.0, beta = 0.0;         // holt_winters
  std::vector<double> coeffs;             // custom
};

ConvolutionFilter build_filter(const FilterSpec& spec);

// Shorthands for the catalog.
ConvolutionFilter sma_filter(int window);
ConvolutionFilter ewma_filter(double lambda, std::optional<std::size_t> k = std::nullopt);
ConvolutionFilter triangular_filter(int window);
ConvolutionFilter sma_difference_filter(int fast, int slow);
ConvolutionFilter ewma_difference_filter(double lambda_fast, double lambda_slow, std::optional<std::size_t> k = std::nullopt);
ConvolutionFilter arma_forecast_filter(std::span<const double> ar, std::span<const double> ma,
                                       std::optional<std::size_t> k = std::nullopt);
ConvolutionFilter holt_winters_filter(double alpha, double beta, std::optional<std::size_t> k = std::nullopt);
ConvolutionFilter custom_filter(std::vector<double> coeffs, std::string label = "custom");

// Smallest K with lambda^K < 1e-10.
std::size_t ewma_auto_truncation(double lambda);

// phi' C phi with C the acf Toeplitz matrix (unit return variance).
double filter_quadratic_form(const ConvolutionFilter& filter, const ReturnProcess& process);

// sigma_X^2 = sigma_R^2 phi' C phi
double signal_variance(const ConvolutionFilter& filter, const ReturnProcess& process);

// corr(X_t, R_t) = sum phi(k) acf(k) / sqrt(phi' C phi)
double signal_return_correlation(const ConvolutionFilter& filter, const ReturnProcess& process);

// corr(X_t, R_{t-lag}); lag 0 is the strategy pairing, negative lags look
// at returns after the one being traded.
double cross_correlation(const ConvolutionFilter& filter, const ReturnProcess& process, long lag);

// corr(X_t, X_{t-lag})
double signal_acf(const ConvolutionFilter& filter, const ReturnProcess& process, long lag);

// Signals for t = K .. n-1 (out[i] pairs with returns[K + i]).
std::vector<double> apply_filter(const ConvolutionFilter& filter, std::span<const double> returns);

}  // namespace dynstrat
