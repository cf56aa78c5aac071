// Deterministic random number generation. All stochastic code paths take an
// explicit Rng; nothing in the library touches hidden global state. Streams
// for independent work items (windows, replicates) are derived from a master
// seed with substream(), which hashes (seed, index) through splitmix64.
#pragma once

#include <cstdint>
#include <random>

namespace riskbt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0,1): both endpoints excluded so inverse-CDF sampling is safe.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // 53 random bits
    double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    return u;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and sequence-deterministic.
    const std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline Rng substream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1)));
}

}  // namespace riskbt
