#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "dynstrat/kernels.hpp"

namespace dynstrat::kernels {

// Stubs for the variants not built on this target; never selected because
// isa_available() reports them missing.
#if !defined(DYNSTRAT_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void causal_filter(std::span<const double> x, std::span<const double> c, std::span<double> o) { scalar::causal_filter(x, c, o); }
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> o) { scalar::multiply(a, b, o); }
PowerSums power_sums(std::span<const double> x, double s) { return scalar::power_sums(x, s); }
}  // namespace avx2
#endif
#if !defined(DYNSTRAT_HAVE_NEON)
namespace neon {
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void causal_filter(std::span<const double> x, std::span<const double> c, std::span<double> o) { scalar::causal_filter(x, c, o); }
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> o) { scalar::multiply(a, b, o); }
PowerSums power_sums(std::span<const double> x, double s) { return scalar::power_sums(x, s); }
}  // namespace neon
#endif

namespace {

Isa detect() {
  if (const char* env = std::getenv("DYNSTRAT_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(DYNSTRAT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DYNSTRAT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument(std::string("ISA not available: ") + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::dot(a, b);
    case Isa::neon: return neon::dot(a, b);
    default: return scalar::dot(a, b);
  }
}

void causal_filter(std::span<const double> x, std::span<const double> coeffs, std::span<double> out) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::causal_filter(x, coeffs, out);
    case Isa::neon: return neon::causal_filter(x, coeffs, out);
    default: return scalar::causal_filter(x, coeffs, out);
  }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::multiply(a, b, out);
    case Isa::neon: return neon::multiply(a, b, out);
    default: return scalar::multiply(a, b, out);
  }
}

PowerSums power_sums(std::span<const double> x, double shift) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::power_sums(x, shift);
    case Isa::neon: return neon::power_sums(x, shift);
    default: return scalar::power_sums(x, shift);
  }
}

}  // namespace dynstrat::kernels
