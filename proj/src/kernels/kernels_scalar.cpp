#include <cassert>

#include "dynstrat/kernels.hpp"

namespace dynstrat::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out) {
  const std::size_t k = coeffs.size();
  assert(x.size() >= k && out.size() == x.size() - k);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t lag = 1; lag <= k; ++lag) acc += coeffs[lag - 1] * x[i + k - lag];
    out[i] = acc;
  }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

PowerSums power_sums(std::span<const double> x, double shift) {
  PowerSums p;
  p.n = x.size();
  for (double v : x) {
    const double d = v - shift;
    const double d2 = d * d;
    p.s1 += d;
    p.s2 += d2;
    p.s3 += d2 * d;
    p.s4 += d2 * d2;
  }
  return p;
}

}  // namespace dynstrat::kernels::scalar
