#pragma once

#include <cstdint>
#include <vector>

namespace safeoc {

// Active-feature view of a state. Tabular states activate exactly one index
// (the state id); tile-coded states activate one index per tiling. All
// parameter tables are keyed by these indices.
using Features = std::vector<std::uint32_t>;

}  // namespace safeoc
