#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace icpc {

// Deterministic random source. All simulator randomness flows through this
// wrapper so that identical (seed, stream) pairs reproduce bit-identical
// draws regardless of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stateless mixing (SplitMix64 finalizer) for counter-indexed draws. Firm
// panels key their per-firm, per-period decisions on (seed, firm, period),
// so a panel of n firms embeds every smaller panel with the same seed.
inline std::uint64_t hash_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double hash_uniform01(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b) {
  std::uint64_t h = hash_mix(seed ^ 0xd1b54a32d192ed03ULL);
  h = hash_mix(h + 0x9e3779b97f4a7c15ULL * (a + 1));
  h = hash_mix(h ^ (b + 0x517cc1b727220a95ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace icpc
