#include "safeoc/learner.hpp"

#include <algorithm>

namespace safeoc {

double td_error(const OptionParameters& params, const LearnerConfig& config,
                std::span<const std::uint32_t> state, int action, double reward,
                std::span<const std::uint32_t> next_state, bool terminal,
                int option) {
  const double q_sa = q_u_value(params, state, option, action);
  if (terminal) {
    return reward - q_sa;
  }
  const std::vector<double> q_next = q_omega_values(params, next_state);
  const double continue_value = q_next[static_cast<std::size_t>(option)];
  const double best_value = *std::max_element(q_next.begin(), q_next.end());
  const double beta = termination_prob(params, option, next_state);
  return reward +
         config.gamma.value() *
             ((1.0 - beta) * continue_value + beta * best_value) -
         q_sa;
}

void critic_update(OptionParameters& params,
                   std::span<const std::uint32_t> state, int option, int action,
                   double delta, double alpha_critic) {
  const double step = alpha_critic * delta / static_cast<double>(state.size());
  for (std::uint32_t i : state) {
    params.q_u(i, option, action) += step;
  }
}

void actor_update(OptionParameters& params, const LearnerConfig& config,
                  std::span<const std::uint32_t> state, int option, int action,
                  const EpisodeAnchor& anchor) {
  if (!anchor.has_delta) {
    throw std::logic_error("actor_update: episode anchor not populated");
  }
  // Both gradients are taken at the current theta before either term lands.
  const GradLogPolicy grad = grad_log_intra_option(params, option, state, action);
  const GradLogPolicy grad0 =
      grad_log_intra_option(params, anchor.omega0, anchor.s0, anchor.a0);

  const double q_hat = q_u_value(params, state, option, action);
  const double gain =
      config.alpha_theta * q_hat / static_cast<double>(state.size());
  for (int a = 0; a < params.num_actions(); ++a) {
    const double increment = gain * grad.coeff[static_cast<std::size_t>(a)];
    for (std::uint32_t i : state) {
      params.theta(option, i, a) += increment;
    }
  }

  const double penalty = config.alpha_theta * config.psi * anchor.delta0 *
                         anchor.delta0 /
                         static_cast<double>(anchor.s0.size());
  for (int a = 0; a < params.num_actions(); ++a) {
    const double decrement = penalty * grad0.coeff[static_cast<std::size_t>(a)];
    for (std::uint32_t i : anchor.s0) {
      params.theta(anchor.omega0, i, a) -= decrement;
    }
  }
}

void termination_update(OptionParameters& params, const LearnerConfig& config,
                        std::span<const std::uint32_t> next_state, int option) {
  const double beta = termination_prob(params, option, next_state);
  const double advantage =
      q_omega(params, next_state, option) - v_omega(params, next_state);
  const double step = config.alpha_nu * beta * (1.0 - beta) * advantage /
                      static_cast<double>(next_state.size());
  for (std::uint32_t i : next_state) {
    params.nu(option, i) -= step;
  }
}

}  // namespace safeoc
