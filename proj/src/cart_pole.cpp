#include "safeoc/cart_pole.hpp"

#include <cmath>
#include <stdexcept>

namespace safeoc {

CartPoleEnv::CartPoleEnv(CartPoleConfig config) : config_(config) {
  if (config_.dt <= 0.0 || config_.cart_mass <= 0.0 || config_.pole_mass < 0.0) {
    throw std::invalid_argument("CartPoleEnv: bad physical constants");
  }
  if (config_.step_cap < 1) {
    throw std::invalid_argument("CartPoleEnv: step_cap must be >= 1");
  }
}

CartState CartPoleEnv::reset(Rng& rng) {
  CartState s;
  s.position = rng.sample_range(-0.05, 0.05);
  s.velocity = rng.sample_range(-0.05, 0.05);
  s.angle = rng.sample_range(-0.05, 0.05);
  s.angular_velocity = rng.sample_range(-0.05, 0.05);
  return s;
}

bool CartPoleEnv::is_terminal(const State& state) const {
  return std::abs(state.position) > config_.position_limit ||
         std::abs(state.angle) > config_.angle_limit;
}

Transition<CartState> CartPoleEnv::step(const State& state, int action) const {
  if (is_terminal(state)) {
    throw std::logic_error("CartPoleEnv::step: state is terminal");
  }
  if (action != kPushLeft && action != kPushRight) {
    throw std::invalid_argument("CartPoleEnv::step: bad action index");
  }

  const double force = action == kPushRight ? config_.force : -config_.force;
  const double total_mass = config_.cart_mass + config_.pole_mass;
  const double pole_mass_length = config_.pole_mass * config_.pole_half_length;
  const double cos_theta = std::cos(state.angle);
  const double sin_theta = std::sin(state.angle);

  const double temp =
      (force + pole_mass_length * state.angular_velocity *
                   state.angular_velocity * sin_theta) /
      total_mass;
  const double angular_accel =
      (config_.gravity * sin_theta - cos_theta * temp) /
      (config_.pole_half_length *
       (4.0 / 3.0 - config_.pole_mass * cos_theta * cos_theta / total_mass));
  const double linear_accel =
      temp - pole_mass_length * angular_accel * cos_theta / total_mass;

  Transition<CartState> t;
  t.state = state;
  t.action = action;
  t.next_state.position = state.position + config_.dt * state.velocity;
  t.next_state.velocity = state.velocity + config_.dt * linear_accel;
  t.next_state.angle = state.angle + config_.dt * state.angular_velocity;
  t.next_state.angular_velocity =
      state.angular_velocity + config_.dt * angular_accel;
  t.reward = 1.0;
  t.terminal = is_terminal(t.next_state);
  return t;
}

}  // namespace safeoc
