#pragma once

// Exact law of S = X * R for zero-mean jointly Gaussian (X, R).

#include <functional>

namespace dynstrat {

// Modified Bessel function of the second kind, order zero.
// Power series for z <= 2, Steed/Temme continued fraction for 2 < z <= 30,
// Hankel asymptotic series above 30.
double bessel_k0(double z);
// e^z K0(z); finite for every z > 0.
double bessel_k0_scaled(double z);

struct ProductDensity {
  double sigma_r = 1.0;
  double sigma_x = 1.0;
  double rho = 0.0;

  // |rho| = 1: S is a scaled chi-square(1) variable and has no density in
  // closed form here. Evaluating such a distribution throws.
  bool degenerate() const;
  // Same law rescaled so Var(S) = 1.
  static ProductDensity unit_variance(double rho);
};

// exp(rho s / (sc (1 - rho^2))) K0(|s| / (sc (1 - rho^2))) / (pi sc sqrt(1 - rho^2)), sc = sigma_r sigma_x.
// Returns +infinity at s = 0 (log singularity).
double product_pdf(double s, const ProductDensity& dist);
double log_product_pdf(double s, const ProductDensity& dist);

using JointPdf = std::function<double(double x, double y)>;
JointPdf bivariate_gaussian_pdf(const ProductDensity& dist);

// Integral of psi(x, s/x)/|x| over x != 0, computed in log|x|.
double product_pdf_numeric(double s, const JointPdf& joint_pdf);

// Integral of s^order p(s) over the whole line (order 0 is the total mass).
double product_pdf_moment(const ProductDensity& dist, int order);

struct TailExponents {
  double right_tail_rate = 0;  // fitted -d log p / ds on s in [10, 30]
  double left_tail_rate = 0;   // same on s in [-30, -10]
  double right_tail_theory = 0;  // 1 / (sigma_r sigma_x (1 + rho))
  double left_tail_theory = 0;   // 1 / (sigma_r sigma_x (1 - rho))
  double origin_log_ratio_max = 0;  // max p(s) / -log|s| on [1e-8, 1e-4]
  const char* origin_behavior = "logarithmic";
};

TailExponents tail_exponents(const ProductDensity& dist);

}  // namespace dynstrat
