#include "safeoc/tile_coder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safeoc {

TileCoder::TileCoder(int tilings, std::vector<int> bins,
                     std::vector<FeatureRange> ranges)
    : tilings_(tilings), bins_(std::move(bins)), ranges_(std::move(ranges)) {
  if (tilings_ < 1) {
    throw std::invalid_argument("TileCoder: tilings must be >= 1");
  }
  if (bins_.empty() || bins_.size() != ranges_.size()) {
    throw std::invalid_argument("TileCoder: bins/ranges size mismatch");
  }
  std::uint64_t cells = 1;
  for (std::size_t f = 0; f < bins_.size(); ++f) {
    if (bins_[f] < 1) {
      throw std::invalid_argument("TileCoder: bins must be >= 1");
    }
    if (!(ranges_[f].low < ranges_[f].high)) {
      throw std::invalid_argument("TileCoder: empty feature range");
    }
    cells *= static_cast<std::uint64_t>(bins_[f]);
  }
  const std::uint64_t total = cells * static_cast<std::uint64_t>(tilings_);
  if (total > (1ULL << 31)) {
    throw std::invalid_argument("TileCoder: index table too large");
  }
  cells_per_tiling_ = static_cast<std::uint32_t>(cells);
  table_size_ = static_cast<std::uint32_t>(total);
}

Features TileCoder::encode(std::span<const double> features) const {
  if (features.size() != bins_.size()) {
    throw std::invalid_argument("TileCoder::encode: expected " +
                                std::to_string(bins_.size()) +
                                " features, got " +
                                std::to_string(features.size()));
  }
  Features active;
  active.reserve(static_cast<std::size_t>(tilings_));
  for (int t = 0; t < tilings_; ++t) {
    std::uint32_t flat = 0;
    for (std::size_t f = 0; f < bins_.size(); ++f) {
      const FeatureRange& range = ranges_[f];
      const double clipped = std::clamp(features[f], range.low, range.high);
      const double unit = (clipped - range.low) / (range.high - range.low);
      // Fractional part of the asymmetric displacement t*(2f+1)/tilings, in
      // bin widths.
      const double raw_offset = static_cast<double>(t) *
                                static_cast<double>(2 * f + 1) /
                                static_cast<double>(tilings_);
      const double offset = raw_offset - std::floor(raw_offset);
      const double scaled = unit * static_cast<double>(bins_[f]) + offset;
      const int bin = std::clamp(static_cast<int>(std::floor(scaled)), 0,
                                 bins_[f] - 1);
      flat = flat * static_cast<std::uint32_t>(bins_[f]) +
             static_cast<std::uint32_t>(bin);
    }
    active.push_back(static_cast<std::uint32_t>(t) * cells_per_tiling_ + flat);
  }
  return active;
}

TileCoder TileCoder::cart_pole_default() {
  const double angle_limit = 12.0 * 3.14159265358979323846 / 180.0;
  return TileCoder(1, {3, 3, 3, 6},
                   {FeatureRange{-2.4, 2.4}, FeatureRange{-3.0, 3.0},
                    FeatureRange{-angle_limit, angle_limit},
                    FeatureRange{-4.0, 4.0}});
}

}  // namespace safeoc
