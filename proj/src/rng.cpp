#include "safeoc/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace safeoc {

std::uint64_t Rng::sample_index(std::uint64_t n) {
  if (n == 0 || n >= (1ULL << 53)) {
    throw std::invalid_argument("Rng::sample_index: n out of range");
  }
  return static_cast<std::uint64_t>(sample_uniform() * static_cast<double>(n));
}

int sample_categorical(Rng& rng, std::span<const double> probs) {
  if (probs.empty()) {
    throw std::invalid_argument("sample_categorical: empty distribution");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument(
          "sample_categorical: negative or non-finite probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("sample_categorical: probabilities sum to " +
                                std::to_string(sum));
  }

  const double u = rng.sample_uniform();
  double cumulative = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      cumulative += probs[i];
      last_positive = static_cast<int>(i);
      if (u < cumulative) {
        return last_positive;
      }
    }
  }
  // Rounding can leave the cumulative sum a hair below 1; fall back to the
  // last index that carries positive mass.
  return last_positive;
}

}  // namespace safeoc
