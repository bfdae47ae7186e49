#include "dynstrat/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

Eigen::MatrixXd centered(const Eigen::MatrixXd& m) { return m.rowwise() - m.colwise().mean(); }

Eigen::MatrixXd covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.transpose() * b / static_cast<double>(a.rows());
}

// Cholesky factor of a covariance block, refusing near-singular blocks.
Eigen::MatrixXd whitening_factor(const Eigen::MatrixXd& cov, const char* block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top)
    fail(ErrorKind::regularization_needed, std::string(block) + " covariance block is singular; regularize before CCA");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::regularization_needed, std::string(block) + " covariance block is not positive definite");
  return llt.matrixL();
}

}  // namespace

void DesignMatrix::validate() const {
  const auto t = features.rows(), k = features.cols();
  require(k >= 1, ErrorKind::validation, "design needs at least one feature");
  require(target.size() == t, ErrorKind::validation, "target length does not match the feature rows");
  require(t > k, ErrorKind::sample_size, "design needs more rows than features");
  require(features.allFinite() && target.allFinite(), ErrorKind::validation, "design entries must be finite");
}

DesignMatrix lagged_design(std::span<const double> returns, int k) {
  require(k >= 1, ErrorKind::validation, "lag count must be at least 1");
  const auto n = static_cast<long>(returns.size());
  require(n - k > k, ErrorKind::sample_size, "too few returns for the requested lags");
  DesignMatrix d;
  d.features.resize(n - k, k);
  d.target.resize(n - k);
  for (long t = k; t < n; ++t) {
    d.target(t - k) = returns[static_cast<std::size_t>(t)];
    for (int j = 1; j <= k; ++j) d.features(t - k, j - 1) = returns[static_cast<std::size_t>(t - j)];
  }
  return d;
}

DesignMatrix standardized(const DesignMatrix& d) {
  d.validate();
  DesignMatrix out{centered(d.features), d.target.array() - d.target.mean()};
  const double n = static_cast<double>(d.features.rows());
  for (Eigen::Index j = 0; j < out.features.cols(); ++j) {
    const double sd = std::sqrt(out.features.col(j).squaredNorm() / n);
    require(sd > 0.0, ErrorKind::degenerate, "feature column has zero variance");
    out.features.col(j) /= sd;
  }
  const double sd = std::sqrt(out.target.squaredNorm() / n);
  require(sd > 0.0, ErrorKind::degenerate, "target has zero variance");
  out.target /= sd;
  return out;
}

Eigen::VectorXd ols_fit(const DesignMatrix& d) {
  d.validate();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.features, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  require(s(s.size() - 1) > 1e-12 * s(0), ErrorKind::singular, "design matrix is rank deficient");
  return svd.solve(d.target);
}

TlsFit tls_fit(const DesignMatrix& d) {
  d.validate();
  const Eigen::Index k = d.features.cols();
  Eigen::MatrixXd rz(d.features.rows(), k + 1);
  rz.col(0) = d.target;
  rz.rightCols(k) = d.features;
  Eigen::JacobiSVD<Eigen::MatrixXd> full(rz, Eigen::ComputeThinV);
  const auto& sv = full.singularValues();
  const double sigma = sv(k);
  const double scale = std::max(sv(0), 1e-300);
  require(sv(k - 1) - sigma > 1e-10 * scale, ErrorKind::degenerate,
          "smallest singular value of [R, Z] is repeated; TLS solution is not unique");

  Eigen::JacobiSVD<Eigen::MatrixXd> zsvd(d.features, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd lam = zsvd.singularValues();
  require(lam(k - 1) > 1e-12 * lam(0), ErrorKind::singular, "design matrix is rank deficient");
  require(lam(k - 1) - sigma > 1e-10 * scale, ErrorKind::degenerate,
          "smallest singular value of Z equals that of [R, Z]; TLS solution is not unique");

  TlsFit fit;
  fit.sigma_min = sigma;
  fit.singular_values = lam;
  // (Z'Z - sigma^2 I)^{-1} Z'R = V diag(lam / (lam^2 - sigma^2)) U'R
  const Eigen::VectorXd w = lam.array() / (lam.array().square() - sigma * sigma);
  fit.beta = zsvd.matrixV() * (w.asDiagonal() * (zsvd.matrixU().transpose() * d.target));

  const Eigen::VectorXd v = full.matrixV().col(k);
  require(std::abs(v(0)) > 1e-14, ErrorKind::degenerate, "TLS null direction has no target component");
  fit.beta_pca = -v.tail(k) / v(0);

  const double gap = (fit.beta - fit.beta_pca).cwiseAbs().maxCoeff();
  require(gap <= 1e-8 * std::max(1.0, fit.beta.cwiseAbs().maxCoeff()), ErrorKind::numeric,
          "TLS SVD and principal-component routes disagree");
  return fit;
}

double hat_trace(const DesignMatrix& d, FitMethod method) {
  if (method == FitMethod::ols) {
    d.validate();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.features);
    const auto& s = svd.singularValues();
    require(s(s.size() - 1) > 1e-12 * s(0), ErrorKind::singular, "design matrix is rank deficient");
    double tr = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) tr += s(i) * s(i) / (s(i) * s(i));
    return tr;
  }
  const TlsFit fit = tls_fit(d);
  const double s2 = fit.sigma_min * fit.sigma_min;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < fit.singular_values.size(); ++i) {
    const double l2 = fit.singular_values(i) * fit.singular_values(i);
    tr += l2 / (l2 - s2);
  }
  return tr;
}

double in_sample_correlation(const DesignMatrix& d, const Eigen::VectorXd& beta) {
  d.validate();
  require(beta.size() == d.features.cols(), ErrorKind::validation, "coefficient length does not match the design");
  const Eigen::VectorXd x = d.features * beta;
  const Eigen::VectorXd xc = x.array() - x.mean(), rc = d.target.array() - d.target.mean();
  const double den = std::sqrt(xc.squaredNorm() * rc.squaredNorm());
  require(den > 0.0, ErrorKind::degenerate, "fitted signal or target has zero variance");
  return xc.dot(rc) / den;
}

CcaResult cca(const Eigen::MatrixXd& returns, const Eigen::MatrixXd& signals) {
  const Eigen::Index t = returns.rows(), n = returns.cols(), m = signals.cols();
  require(signals.rows() == t, ErrorKind::validation, "return and signal blocks need the same row count");
  require(n >= 1 && m >= 1, ErrorKind::validation, "CCA blocks need at least one column each");
  require(t > n + m, ErrorKind::sample_size, "CCA needs more rows than total columns");
  require(returns.allFinite() && signals.allFinite(), ErrorKind::validation, "CCA inputs must be finite");
  const Eigen::MatrixXd r = centered(returns), x = centered(signals);
  const Eigen::MatrixXd lr = whitening_factor(covariance(r, r), "return");
  const Eigen::MatrixXd lx = whitening_factor(covariance(x, x), "signal");
  // K = L_R^{-1} S_RX L_X^{-T}; singular vectors of K give the canonical pairs.
  const Eigen::MatrixXd srx = covariance(r, x);
  const Eigen::MatrixXd left = lr.triangularView<Eigen::Lower>().solve(srx);
  const Eigen::MatrixXd kmat = lx.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kmat, Eigen::ComputeThinU | Eigen::ComputeThinV);

  CcaResult out;
  const Eigen::Index pairs = std::min(n, m);
  for (Eigen::Index i = 0; i < pairs; ++i) {
    const double rk = std::min(1.0, svd.singularValues()(i));
    Eigen::VectorXd w = lr.transpose().triangularView<Eigen::Upper>().solve(svd.matrixU().col(i));
    Eigen::VectorXd v = lx.transpose().triangularView<Eigen::Upper>().solve(svd.matrixV().col(i));
    w.normalize();
    v.normalize();
    out.correlations.push_back(rk);
    out.return_weights.push_back(w);
    out.signal_weights.push_back(v);
    out.strategy_sharpes.push_back(rk / std::sqrt(rk * rk + 1.0));
  }
  return out;
}

Eigen::MatrixXd canonical_strategies(const Eigen::MatrixXd& returns, const Eigen::MatrixXd& signals, const CcaResult& fit) {
  const Eigen::MatrixXd r = centered(returns), x = centered(signals);
  Eigen::MatrixXd s(r.rows(), static_cast<Eigen::Index>(fit.correlations.size()));
  for (Eigen::Index k = 0; k < s.cols(); ++k)
    s.col(k) = (x * fit.signal_weights[static_cast<std::size_t>(k)]).cwiseProduct(r * fit.return_weights[static_cast<std::size_t>(k)]);
  return s;
}

ConvolutionFilter min_acf_eigen_filter(const Eigen::MatrixXd& c_tilde) {
  require(c_tilde.rows() == c_tilde.cols() && c_tilde.rows() >= 2, ErrorKind::validation,
          "ACF matrix must be square with at least two rows");
  require((c_tilde - c_tilde.transpose()).cwiseAbs().maxCoeff() <= 1e-12, ErrorKind::validation,
          "ACF matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c_tilde);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  require(ev(1) - ev(0) > 1e-10 * scale, ErrorKind::degenerate,
          "smallest ACF eigenvalue is repeated; eigenvector filter is not defined");
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  require(std::abs(v(0)) > 1e-12, ErrorKind::degenerate, "eigenvector has no weight on R_t; cannot normalize");
  std::vector<double> a(static_cast<std::size_t>(v.size() - 1));
  for (Eigen::Index k = 1; k < v.size(); ++k) a[static_cast<std::size_t>(k - 1)] = -v(k) / v(0);
  return {std::move(a), "min_acf_eigen(k=" + std::to_string(v.size() - 1) + ")"};
}

ConvolutionFilter min_acf_eigen_filter(const ReturnProcess& process, int k) {
  require(k >= 1, ErrorKind::validation, "filter length must be at least 1");
  return min_acf_eigen_filter(acf_toeplitz(process, static_cast<std::size_t>(k) + 1));
}

ConvolutionFilter max_correlation_filter(const ReturnProcess& process, int k) {
  require(k >= 1, ErrorKind::validation, "filter length must be at least 1");
  const Eigen::MatrixXd c = acf_toeplitz(process, static_cast<std::size_t>(k));
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) rhs(i) = process.acf(i + 1);
  require(rhs.cwiseAbs().maxCoeff() > 0.0, ErrorKind::degenerate, "returns are uncorrelated; no predictive filter exists");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
  require(ldlt.info() == Eigen::Success && ldlt.isPositive(), ErrorKind::singular, "ACF matrix is not positive definite");
  const Eigen::VectorXd phi = ldlt.solve(rhs);
  return {std::vector<double>(phi.data(), phi.data() + phi.size()), "max_correlation(k=" + std::to_string(k) + ")"};
}

}  // namespace dynstrat
