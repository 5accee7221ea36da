#pragma once

#include <cstdint>
#include <random>

namespace ldforge {

// Deterministic seeded generator. mt19937_64 output is pinned by the
// standard, and the bounded draw is a plain modulo reduction, so the
// same seed yields the same draw sequence on every platform. Every
// random choice in the library goes through draw()/draw_double() in an
// order documented at the call site.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t draw(std::uint64_t n) { return gen_() % n; }

  // Uniform in [0, 1) with 53 random bits.
  double draw_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

// Splitmix-style mixer for deriving per-item seeds from (seed, index)
// without correlated streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ldforge
