#pragma once

#include "safeoc/features.hpp"
#include "safeoc/rng.hpp"
#include "safeoc/tile_coder.hpp"
#include "safeoc/transition.hpp"

namespace safeoc {

enum CartPoleAction { kPushLeft = 0, kPushRight = 1 };

// Classic cart-pole benchmark constants.
struct CartPoleConfig {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_half_length = 0.5;
  double gravity = 9.8;
  double force = 10.0;
  double dt = 0.02;
  double angle_limit = 12.0 * 3.14159265358979323846 / 180.0;
  double position_limit = 2.4;
  int step_cap = 200;
};

struct CartState {
  double position = 0.0;
  double velocity = 0.0;
  double angle = 0.0;
  double angular_velocity = 0.0;

  bool operator==(const CartState&) const = default;
};

// Cart with a pole attached; the agent pushes left or right and earns +1 per
// step. Dynamics follow the standard equations of motion integrated one
// timestep with explicit Euler in the usual order (position advances with the
// pre-step velocity).
class CartPoleEnv {
 public:
  using State = CartState;

  explicit CartPoleEnv(CartPoleConfig config = {});

  // Uniform initial state in [-0.05, 0.05] per component; four draws.
  State reset(Rng& rng);

  // Pure one-step integration from the given state. Throws std::logic_error
  // when called on a terminal state.
  Transition<State> step(const State& state, int action) const;

  // Same, with an (unused) rng parameter for interface uniformity.
  Transition<State> step(const State& state, int action, Rng&) const {
    return step(state, action);
  }

  // Terminal exactly when |position| or |angle| exceeds its limit. The step
  // cap truncates episodes instead, bootstrapping the final update.
  bool is_terminal(const State& state) const;

  int num_actions() const { return 2; }
  int step_cap() const { return config_.step_cap; }
  const CartPoleConfig& config() const { return config_; }

 private:
  CartPoleConfig config_;
};

// Cart-pole presented to the learner through tile-coded features.
class TiledCartPole {
 public:
  using State = CartState;

  TiledCartPole(CartPoleConfig config, TileCoder coder)
      : env_(config), coder_(std::move(coder)) {}

  State reset(Rng& rng) { return env_.reset(rng); }
  Transition<State> step(const State& s, int action, Rng&) {
    return env_.step(s, action);
  }
  int num_actions() const { return env_.num_actions(); }
  int step_cap() const { return env_.step_cap(); }
  std::uint32_t num_features() const { return coder_.table_size(); }
  const CartPoleEnv& env() const { return env_; }
  const TileCoder& coder() const { return coder_; }

  Features featurize(const State& s) const {
    const double obs[4] = {s.position, s.velocity, s.angle,
                           s.angular_velocity};
    return coder_.encode(obs);
  }

 private:
  CartPoleEnv env_;
  TileCoder coder_;
};

}  // namespace safeoc
