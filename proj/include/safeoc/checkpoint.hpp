#pragma once

#include <string>

#include "safeoc/grid_map.hpp"
#include "safeoc/option_model.hpp"
#include "safeoc/tile_coder.hpp"

namespace safeoc {

enum class EnvKind { FourRooms, CartPole };

std::string env_kind_name(EnvKind kind);
EnvKind env_kind_from_name(const std::string& name);

// Trained parameters together with the environment description needed to
// evaluate them: the map for the gridworld, the tile-coder configuration for
// cart-pole.
//
// File format (plain text, versioned):
//   safeoc-checkpoint 1
//   env fourrooms|cartpole
//   map <height> <width>           (fourrooms: followed by the raw map rows)
//   tilecoder <tilings> <dims>     (cartpole)
//   bins <b_0> ... <b_{dims-1}>
//   ranges <lo_0> <hi_0> ... <lo_{dims-1}> <hi_{dims-1}>
//   params <options> <actions> <features> <temperature>
//   theta <count>   followed by <count> whitespace-separated values
//   nu <count>      ...
//   q_u <count>     ...
// Values are written with 17 significant digits and reload exactly.
struct Checkpoint {
  EnvKind env_kind;
  GridMap map;          // valid when env_kind == FourRooms
  int tilings = 0;      // cart-pole coder config
  std::vector<int> bins;
  std::vector<FeatureRange> ranges;
  OptionParameters params;

  TileCoder make_coder() const { return TileCoder(tilings, bins, ranges); }
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace safeoc
