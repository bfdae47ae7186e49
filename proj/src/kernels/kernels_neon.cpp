// aarch64 only; Advanced SIMD is mandatory there, so no runtime probe is needed.
#include <arm_neon.h>

#include <cassert>

#include "dynstrat/kernels.hpp"

namespace dynstrat::kernels::neon {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out) {
  const std::size_t k = coeffs.size();
  assert(x.size() >= k && out.size() == x.size() - k);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    for (std::size_t lag = 1; lag <= k; ++lag) {
      const float64x2_t c = vdupq_n_f64(coeffs[lag - 1]);
      const double* src = x.data() + i + k - lag;
      a0 = vfmaq_f64(a0, c, vld1q_f64(src));
      a1 = vfmaq_f64(a1, c, vld1q_f64(src + 2));
    }
    vst1q_f64(out.data() + i, a0);
    vst1q_f64(out.data() + i + 2, a1);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t lag = 1; lag <= k; ++lag) acc += coeffs[lag - 1] * x[i + k - lag];
    out[i] = acc;
  }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() == a.size());
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out.data() + i, vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

PowerSums power_sums(std::span<const double> x, double shift) {
  const std::size_t n = x.size();
  const float64x2_t sh = vdupq_n_f64(shift);
  float64x2_t s1 = vdupq_n_f64(0.0), s2 = s1, s3 = s1, s4 = s1;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x.data() + i), sh);
    const float64x2_t d2 = vmulq_f64(d, d);
    s1 = vaddq_f64(s1, d);
    s2 = vaddq_f64(s2, d2);
    s3 = vfmaq_f64(s3, d2, d);
    s4 = vfmaq_f64(s4, d2, d2);
  }
  PowerSums p;
  p.n = n;
  p.s1 = vaddvq_f64(s1);
  p.s2 = vaddvq_f64(s2);
  p.s3 = vaddvq_f64(s3);
  p.s4 = vaddvq_f64(s4);
  for (; i < n; ++i) {
    const double d = x[i] - shift;
    const double d2 = d * d;
    p.s1 += d;
    p.s2 += d2;
    p.s3 += d2 * d;
    p.s4 += d2 * d2;
  }
  return p;
}

}  // namespace dynstrat::kernels::neon
