#pragma once

#include <cstdint>

#include "safeoc/features.hpp"
#include "safeoc/grid_map.hpp"
#include "safeoc/rng.hpp"
#include "safeoc/transition.hpp"

namespace safeoc {

// Actions of the gridworld, fixed order.
enum FourRoomsAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

char four_rooms_action_letter(int action);

struct FourRoomsConfig {
  // Probability the chosen action is replaced by one drawn uniformly from all
  // four actions, so the intended action can still occur by chance.
  double slip_prob = 0.2;
  // Frozen-cell rewards are uniform on [low, high]; the support is symmetric
  // about 0 so the expected frozen reward matches the normal-cell reward.
  double frozen_reward_low = -15.0;
  double frozen_reward_high = 15.0;
  double goal_reward = 50.0;
  int step_cap = 500;
};

// Four-rooms gridworld with slippery actions and high-variance "frozen"
// cells. States are row-major cell indices into the map.
class FourRoomsEnv {
 public:
  using State = int;

  explicit FourRoomsEnv(GridMap map, FourRoomsConfig config = {});

  // Uniformly random non-wall, non-goal cell. Consumes one draw.
  State reset(Rng& rng);

  // Executes the chosen action with probability 1-slip_prob, otherwise a
  // uniformly random one. Moving into a wall keeps the agent in place with
  // reward 0; normal cells give 0, frozen cells a uniform draw from the
  // configured support, and the goal gives goal_reward and ends the episode.
  // Draw consumption per step: one slip draw, plus one action draw when the
  // slip fires, plus one reward draw when a frozen cell is entered.
  Transition<State> step(State state, int action, Rng& rng);

  int num_actions() const { return 4; }
  int num_states() const { return map_.width * map_.height; }
  Features featurize(State s) const { return {static_cast<std::uint32_t>(s)}; }

  const GridMap& map() const { return map_; }
  const FourRoomsConfig& config() const { return config_; }
  int step_cap() const { return config_.step_cap; }

  // Metrics hooks used by the episode runner.
  std::size_t visit_slots() const { return map_.cells.size(); }
  int visit_index(State s) const { return s; }
  bool frozen_entry(const Transition<State>& t) const {
    return t.next_state != t.state && map_.at_index(t.next_state) == Cell::Frozen;
  }

  // Diagnostic counters.
  std::uint64_t steps_taken() const { return steps_taken_; }
  std::uint64_t slips_taken() const { return slips_taken_; }

 private:
  GridMap map_;
  FourRoomsConfig config_;
  std::vector<int> start_cells_;  // non-wall, non-goal, ascending
  std::uint64_t steps_taken_ = 0;
  std::uint64_t slips_taken_ = 0;
};

}  // namespace safeoc
