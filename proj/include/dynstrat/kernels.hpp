#pragma once

// Data-parallel inner loops used by the simulation and moment code.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once at runtime from CPU features; setting DYNSTRAT_SIMD=scalar in the
// environment (or calling force_isa) pins the reference path. The variants
// reorder floating-point reductions, so they agree with the reference to
// rounding, not bit-for-bit.

#include <cstddef>
#include <span>

namespace dynstrat::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
// Overrides the runtime choice; throws if the ISA is unavailable on this CPU.
void force_isa(Isa isa);

struct PowerSums {
  std::size_t n = 0;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;  // sums of (x - shift)^p

  PowerSums& operator+=(const PowerSums& o) {
    n += o.n; s1 += o.s1; s2 += o.s2; s3 += o.s3; s4 += o.s4;
    return *this;
  }
};

double dot(std::span<const double> a, std::span<const double> b);

// out[i] = sum_{k=1..K} coeffs[k-1] * x[i + K - k] for i in [0, x.size() - K).
// coeffs[0] is the lag-1 weight; out must hold x.size() - K values.
void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out);

// out[i] = a[i] * b[i]
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);

PowerSums power_sums(std::span<const double> x, double shift);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
PowerSums power_sums(std::span<const double> x, double shift);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
PowerSums power_sums(std::span<const double> x, double shift);
}  // namespace avx2

namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
PowerSums power_sums(std::span<const double> x, double shift);
}  // namespace neon

}  // namespace dynstrat::kernels
