#pragma once

// Reproducible random streams.
//
// Algorithm (version 1, frozen for golden tests):
//   - generator: xoshiro256** 1.0 (Blackman & Vigna)
//   - seeding:   four successive SplitMix64 outputs from a stream key
//   - stream key for (seed, stream index): splitmix64(seed ^ splitmix64(index + 1))
//   - uniform:   top 53 bits scaled by 2^-53, in [0, 1)
//   - normal:    Marsaglia polar method, second variate cached
// Independent Monte-Carlo work units draw from Rng(seed, index), so results
// never depend on scheduling or thread count.

#include <cstdint>

namespace dynstrat {

inline constexpr int kRngAlgorithmVersion = 1;

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dynstrat
