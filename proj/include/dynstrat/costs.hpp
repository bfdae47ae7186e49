#pragma once

// Mean-variance utility of a linear strategy net of proportional trading
// costs, with expected turnover E|X_t - X_{t-1}| from the folded normal.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynstrat/process.hpp"
#include "dynstrat/signals.hpp"

namespace dynstrat {

struct CostSpec {
  double gamma_risk = 0.0;  // risk aversion
  double nu = 0.0;          // cost per unit of |position change|

  void validate() const;
};

// (0, phi_1, phi_2 - phi_1, ..., phi_K - phi_{K-1}, -phi_K): the weights of
// X_t - X_{t-1} on R_t, ..., R_{t-K-1}.
std::vector<double> difference_coefficients(const ConvolutionFilter& filter);

double expected_turnover(const ConvolutionFilter& filter, const ReturnProcess& process);

// E[S] - gamma Var[S] - nu E|dX| with
//   E[S]   = sigma^2 phi'c
//   Var[S] = sigma^4 (phi'C phi + (phi'c)^2)
// and c = (acf(1), ..., acf(K)).
double tc_utility(const ConvolutionFilter& filter, const ReturnProcess& process, const CostSpec& cost);

// Variant in which sigma_X and rho are replaced separately by sqrt(phi'C phi)
// and the unnormalized phi'c. Kept for comparison only.
double tc_utility_surrogate(const ConvolutionFilter& filter, const ReturnProcess& process, const CostSpec& cost);

// Utility and gradient in phi with eps inside the turnover radical.
double tc_utility_smoothed(const std::vector<double>& phi, const ReturnProcess& process, const CostSpec& cost,
                           std::vector<double>* gradient, double eps = 1e-12);

struct OptimizeResult {
  ConvolutionFilter filter;
  double utility = 0;
  double correlation = 0;   // corr(X_t, R_t) of the optimum, 0 for a zero filter
  bool converged = false;
  std::string warning;      // empty when converged
  int iterations = 0;
  std::size_t best_start = 0;
  double gradient_check = 0;  // max relative gap between analytic and finite-difference gradients
  std::vector<double> start_utilities;
};

// Multi-start BFGS (8 starts). Start 0 is init (SMA(k) if absent); the rest
// are seeded random draws. Ties go to the lowest start index.
OptimizeResult optimize_tc_utility(const ReturnProcess& process, int k, const CostSpec& cost,
                                   const std::optional<ConvolutionFilter>& init = std::nullopt,
                                   std::uint64_t seed = 1, int starts = 8);

}  // namespace dynstrat
