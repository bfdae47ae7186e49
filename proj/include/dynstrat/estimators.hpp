#pragma once

// Fitting linear strategies X = Z beta from data, and filters derived from
// a known ACF.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dynstrat/process.hpp"
#include "dynstrat/signals.hpp"

namespace dynstrat {

struct DesignMatrix {
  Eigen::MatrixXd features;  // T x k
  Eigen::VectorXd target;    // T

  void validate() const;
};

// Row t holds (R_{t-1}, ..., R_{t-k}) with target R_t, for t = k .. n-1.
DesignMatrix lagged_design(std::span<const double> returns, int k);
// Centers every column and scales it to unit sample variance.
DesignMatrix standardized(const DesignMatrix& d);

Eigen::VectorXd ols_fit(const DesignMatrix& d);

struct TlsFit {
  Eigen::VectorXd beta;      // SVD route
  Eigen::VectorXd beta_pca;  // null direction of [R, Z]
  double sigma_min = 0;      // smallest singular value of [R, Z]
  Eigen::VectorXd singular_values;  // of Z, descending
};
TlsFit tls_fit(const DesignMatrix& d);

enum class FitMethod { ols, tls };
double hat_trace(const DesignMatrix& d, FitMethod method);

// Sample corr(Z beta, R), both series demeaned.
double in_sample_correlation(const DesignMatrix& d, const Eigen::VectorXd& beta);

struct CcaResult {
  std::vector<double> correlations;            // descending
  std::vector<Eigen::VectorXd> return_weights; // unit vectors
  std::vector<Eigen::VectorXd> signal_weights; // unit vectors
  std::vector<double> strategy_sharpes;        // r / sqrt(r^2 + 1)
};
CcaResult cca(const Eigen::MatrixXd& returns, const Eigen::MatrixXd& signals);
// Column k holds S_k = (signals v_k) .* (returns w_k) on demeaned data.
Eigen::MatrixXd canonical_strategies(const Eigen::MatrixXd& returns, const Eigen::MatrixXd& signals, const CcaResult& fit);

// c_tilde is the (K+1) x (K+1) ACF matrix of (R_t, ..., R_{t-K}). Uses the
// eigenvector v of the smallest eigenvalue, a_k = -v(k+1) / v(1).
ConvolutionFilter min_acf_eigen_filter(const Eigen::MatrixXd& c_tilde);
ConvolutionFilter min_acf_eigen_filter(const ReturnProcess& process, int k);

// phi = C^{-1} c with c = (acf(1), ..., acf(K)): maximizes corr(X_t, R_t)
// over filters of length K.
ConvolutionFilter max_correlation_filter(const ReturnProcess& process, int k);

}  // namespace dynstrat
