// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cassert>

#include "dynstrat/kernels.hpp"

namespace dynstrat::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 8), _mm256_loadu_pd(b.data() + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 12), _mm256_loadu_pd(b.data() + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out) {
  const std::size_t k = coeffs.size();
  assert(x.size() >= k && out.size() == x.size() - k);
  const std::size_t n = out.size();
  const double* xp = x.data();
  std::size_t i = 0;
  // Vectorized over outputs: each lane accumulates its own lag sum in lag order.
  for (; i + 16 <= n; i += 16) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    for (std::size_t lag = 1; lag <= k; ++lag) {
      const __m256d c = _mm256_broadcast_sd(&coeffs[lag - 1]);
      const double* src = xp + i + k - lag;
      a0 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src), a0);
      a1 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 4), a1);
      a2 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 8), a2);
      a3 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 12), a3);
    }
    _mm256_storeu_pd(out.data() + i, a0);
    _mm256_storeu_pd(out.data() + i + 4, a1);
    _mm256_storeu_pd(out.data() + i + 8, a2);
    _mm256_storeu_pd(out.data() + i + 12, a3);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d a0 = _mm256_setzero_pd();
    for (std::size_t lag = 1; lag <= k; ++lag)
      a0 = _mm256_fmadd_pd(_mm256_broadcast_sd(&coeffs[lag - 1]), _mm256_loadu_pd(xp + i + k - lag), a0);
    _mm256_storeu_pd(out.data() + i, a0);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t lag = 1; lag <= k; ++lag) acc += coeffs[lag - 1] * xp[i + k - lag];
    out[i] = acc;
  }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() == a.size());
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

PowerSums power_sums(std::span<const double> x, double shift) {
  const std::size_t n = x.size();
  const __m256d sh = _mm256_set1_pd(shift);
  __m256d s1 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd(), s4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), sh);
    const __m256d d2 = _mm256_mul_pd(d, d);
    s1 = _mm256_add_pd(s1, d);
    s2 = _mm256_add_pd(s2, d2);
    s3 = _mm256_fmadd_pd(d2, d, s3);
    s4 = _mm256_fmadd_pd(d2, d2, s4);
  }
  PowerSums p;
  p.n = n;
  p.s1 = hsum(s1);
  p.s2 = hsum(s2);
  p.s3 = hsum(s3);
  p.s4 = hsum(s4);
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

}  // namespace dynstrat::kernels::avx2
