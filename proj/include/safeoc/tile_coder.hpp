#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "safeoc/features.hpp"

namespace safeoc {

struct FeatureRange {
  double low = 0.0;
  double high = 1.0;
};

// Hashing-free exact joint-grid tile coder. Each tiling partitions the
// (clipped) feature box into a fixed lattice of bins; tiling t is displaced
// by t*(2f+1)/tilings bin widths along feature f (the usual asymmetric
// offsets), and its cells occupy a disjoint block of the index table, so
// encode always yields exactly `tilings` distinct indices.
class TileCoder {
 public:
  TileCoder(int tilings, std::vector<int> bins, std::vector<FeatureRange> ranges);

  // Active index per tiling for the given feature vector. Out-of-range
  // features are clipped to their declared range; a wrong-length input is
  // rejected with std::invalid_argument. Pure: identical inputs produce
  // identical index sets.
  Features encode(std::span<const double> features) const;

  int tilings() const { return tilings_; }
  int num_dims() const { return static_cast<int>(bins_.size()); }
  std::uint32_t table_size() const { return table_size_; }
  const std::vector<int>& bins() const { return bins_; }
  const std::vector<FeatureRange>& ranges() const { return ranges_; }

  // Coder for the cart-pole observation (position, velocity, pole angle,
  // angular velocity): one tiling, 3/3/3/6 bins. Velocity and angular
  // velocity are clipped to [-3, 3] and [-4, 4]; position and angle use the
  // environment limits.
  static TileCoder cart_pole_default();

 private:
  int tilings_;
  std::vector<int> bins_;
  std::vector<FeatureRange> ranges_;
  std::uint32_t cells_per_tiling_;
  std::uint32_t table_size_;
};

}  // namespace safeoc
