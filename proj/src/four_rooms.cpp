#include "safeoc/four_rooms.hpp"

#include <stdexcept>

namespace safeoc {

char four_rooms_action_letter(int action) {
  switch (action) {
    case kUp:
      return 'U';
    case kDown:
      return 'D';
    case kLeft:
      return 'L';
    case kRight:
      return 'R';
    default:
      throw std::invalid_argument("four_rooms_action_letter: bad action");
  }
}

FourRoomsEnv::FourRoomsEnv(GridMap map, FourRoomsConfig config)
    : map_(std::move(map)), config_(config) {
  if (config_.slip_prob < 0.0 || config_.slip_prob > 1.0) {
    throw std::invalid_argument("FourRoomsEnv: slip_prob must lie in [0, 1]");
  }
  if (config_.frozen_reward_low > config_.frozen_reward_high) {
    throw std::invalid_argument("FourRoomsEnv: empty frozen reward support");
  }
  if (config_.step_cap < 1) {
    throw std::invalid_argument("FourRoomsEnv: step_cap must be >= 1");
  }
  for (std::size_t i = 0; i < map_.cells.size(); ++i) {
    if (map_.cells[i] != Cell::Wall && map_.cells[i] != Cell::Goal) {
      start_cells_.push_back(static_cast<int>(i));
    }
  }
}

FourRoomsEnv::State FourRoomsEnv::reset(Rng& rng) {
  return start_cells_[rng.sample_index(start_cells_.size())];
}

Transition<int> FourRoomsEnv::step(State state, int action, Rng& rng) {
  if (state < 0 || state >= num_states() || map_.at_index(state) == Cell::Wall) {
    throw std::logic_error("FourRoomsEnv::step: state is not a free cell");
  }
  if (map_.at_index(state) == Cell::Goal) {
    throw std::logic_error("FourRoomsEnv::step: cannot step from the goal");
  }
  if (action < 0 || action >= num_actions()) {
    throw std::invalid_argument("FourRoomsEnv::step: bad action index");
  }

  ++steps_taken_;
  int executed = action;
  if (rng.sample_uniform() < config_.slip_prob) {
    ++slips_taken_;
    executed = static_cast<int>(rng.sample_index(4));
  }

  const int row = map_.row_of(state);
  const int col = map_.col_of(state);
  int next_row = row;
  int next_col = col;
  switch (executed) {
    case kUp:
      --next_row;
      break;
    case kDown:
      ++next_row;
      break;
    case kLeft:
      --next_col;
      break;
    case kRight:
      ++next_col;
      break;
  }

  Transition<int> t;
  t.state = state;
  t.action = action;
  const Cell target = map_.at(next_row, next_col);
  if (target == Cell::Wall) {
    t.next_state = state;
    t.reward = 0.0;
    t.terminal = false;
    return t;
  }
  t.next_state = map_.index(next_row, next_col);
  switch (target) {
    case Cell::Normal:
      t.reward = 0.0;
      t.terminal = false;
      break;
    case Cell::Frozen:
      t.reward = rng.sample_range(config_.frozen_reward_low,
                                  config_.frozen_reward_high);
      t.terminal = false;
      break;
    case Cell::Goal:
      t.reward = config_.goal_reward;
      t.terminal = true;
      break;
    case Cell::Wall:
      break;  // unreachable
  }
  return t;
}

}  // namespace safeoc
