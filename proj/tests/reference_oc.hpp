#pragma once

// Standalone vanilla option-critic episode loop used as the reference for the
// psi = 0 reduction checks. Mirrors the production episode structure (same
// draw sequence, same arithmetic expression order) but carries no anchor and
// no penalty machinery at all.

#include "safeoc/learner.hpp"
#include "safeoc/option_model.hpp"
#include "safeoc/rng.hpp"

namespace reference_oc {

inline void vanilla_actor_update(safeoc::OptionParameters& params,
                                 const safeoc::LearnerConfig& config,
                                 std::span<const std::uint32_t> state,
                                 int option, int action) {
  const safeoc::GradLogPolicy grad =
      safeoc::grad_log_intra_option(params, option, state, action);
  const double q_hat = safeoc::q_u_value(params, state, option, action);
  const double gain =
      config.alpha_theta * q_hat / static_cast<double>(state.size());
  for (int a = 0; a < params.num_actions(); ++a) {
    const double increment = gain * grad.coeff[static_cast<std::size_t>(a)];
    for (std::uint32_t i : state) {
      params.theta(option, i, a) += increment;
    }
  }
}

template <typename Env>
int run_vanilla_episode(Env& env, safeoc::OptionParameters& params,
                        const safeoc::LearnerConfig& config, safeoc::Rng& rng,
                        int step_cap) {
  using safeoc::Features;
  auto state = env.reset(rng);
  Features features = env.featurize(state);
  int option = safeoc::sample_categorical(
      rng, safeoc::policy_over_options(params, features).probs);

  int steps = 0;
  for (int t = 0; t < step_cap; ++t) {
    const int action = safeoc::sample_categorical(
        rng, safeoc::intra_option_probs(params, option, features).probs);
    const auto transition = env.step(state, action, rng);
    const Features next_features = env.featurize(transition.next_state);

    const double delta = safeoc::td_error(params, config, features, action,
                                          transition.reward, next_features,
                                          transition.terminal, option);
    safeoc::critic_update(params, features, option, action, delta,
                          config.alpha_critic);
    vanilla_actor_update(params, config, features, option, action);
    safeoc::termination_update(params, config, next_features, option);

    ++steps;
    if (transition.terminal) break;
    if (rng.sample_uniform() <
        safeoc::termination_prob(params, option, next_features)) {
      option = safeoc::sample_categorical(
          rng, safeoc::policy_over_options(params, next_features).probs);
    }
    state = transition.next_state;
    features = std::move(next_features);
  }
  return steps;
}

}  // namespace reference_oc
