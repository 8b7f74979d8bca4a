#pragma once

#include <cstdint>
#include <span>

namespace safeoc {

// Deterministic 64-bit pseudo-random generator (splitmix64).
//
// The state advances by the fixed increment 0x9E3779B97F4A7C15 on every draw
// and the output is finalized with the murmur-style mixer
//   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//   z ^= z >> 27; z *= 0x94D049BB133111EB;
//   z ^= z >> 31;
// All arithmetic is unsigned 64-bit, so the same seed yields the same stream
// on every platform and build. Ports in other languages can reproduce the
// stream bit-for-bit from these constants.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Next raw 64-bit output.
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53-bit resolution: (next_u64() >> 11) * 2^-53.
  double sample_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in {0, ..., n-1}, computed as floor(u * n).
  // Consumes exactly one draw. Requires 0 < n < 2^53.
  std::uint64_t sample_index(std::uint64_t n);

  // Uniform double in [lo, hi). Consumes exactly one draw.
  double sample_range(double lo, double hi) {
    return lo + sample_uniform() * (hi - lo);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Draws index i with probability probs[i] using cumulative-sum inversion,
// scanning indices in ascending order. Consumes exactly one uniform draw.
// Entries must be nonnegative and sum to 1 within 1e-6; otherwise the
// distribution is rejected with std::invalid_argument. Never returns an
// index whose probability is exactly zero.
int sample_categorical(Rng& rng, std::span<const double> probs);

}  // namespace safeoc
