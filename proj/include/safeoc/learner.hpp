#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "safeoc/features.hpp"
#include "safeoc/option_model.hpp"
#include "safeoc/rng.hpp"
#include "safeoc/transition.hpp"

namespace safeoc {

// Learner hyperparameters. psi weights the controllability penalty; psi = 0
// recovers plain option-critic exactly.
struct LearnerConfig {
  double psi = 0.0;
  DiscountFactor gamma{0.99};
  double alpha_critic = 0.1;
  double alpha_theta = 0.01;
  double alpha_nu = 0.01;
  double temperature = 1e-3;
  int num_options = 4;

  void validate() const {
    if (psi < 0.0) throw std::invalid_argument("LearnerConfig: psi must be >= 0");
    if (alpha_critic <= 0.0 || alpha_theta <= 0.0 || alpha_nu <= 0.0) {
      throw std::invalid_argument("LearnerConfig: step sizes must be > 0");
    }
    if (temperature <= 0.0) {
      throw std::invalid_argument("LearnerConfig: temperature must be > 0");
    }
    if (num_options < 1) {
      throw std::invalid_argument("LearnerConfig: num_options must be >= 1");
    }
  }
};

// Bookkeeping for the initial state-option pair of the current episode.
// s0/omega0 are fixed at the episode start; a0 and delta0 are refreshed every
// time the current (state, option) equals (s0, omega0), so the penalty always
// uses the most recently observed TD error of the initial pair.
struct EpisodeAnchor {
  Features s0;
  int omega0 = -1;
  int a0 = -1;
  double delta0 = 0.0;
  bool has_delta = false;
};

// One-step TD error of Q_U. Non-terminal transitions bootstrap through the
// termination-weighted mixture of continuing with `option` and switching to
// the best option at the next state; terminal transitions use the reward
// alone.
double td_error(const OptionParameters& params, const LearnerConfig& config,
                std::span<const std::uint32_t> state, int action, double reward,
                std::span<const std::uint32_t> next_state, bool terminal,
                int option);

// Q_U(state, option, action) += alpha_critic * delta, distributed over active
// features (divided by the active-feature count).
void critic_update(OptionParameters& params,
                   std::span<const std::uint32_t> state, int option, int action,
                   double delta, double alpha_critic);

// Intra-option policy update: the vanilla term
//   theta(option, state, .) += alpha_theta * grad_log * Q_U(state, option, action)
// plus the controllability penalty applied at the episode anchor,
//   theta(omega0, s0, .)   -= alpha_theta * psi * delta0^2 * grad_log(a0).
// Both gradients are evaluated at the pre-update theta; Q_U is read after the
// critic update of the same step. Throws std::logic_error when the anchor has
// not been populated this episode.
void actor_update(OptionParameters& params, const LearnerConfig& config,
                  std::span<const std::uint32_t> state, int option, int action,
                  const EpisodeAnchor& anchor);

// Termination update at the next state:
//   nu(option, s') -= alpha_nu * beta*(1-beta) * (q_omega(s',option) - v_omega(s'))
// (the sigmoid derivative written out). Identical for every psi.
void termination_update(OptionParameters& params, const LearnerConfig& config,
                        std::span<const std::uint32_t> next_state, int option);

// Per-episode outcome. `visits` holds per-cell occupancy counts (one per step,
// keyed by the visited next state) for grid environments and stays empty
// otherwise; frozen_visits counts entries into frozen cells.
struct EpisodeRecord {
  double discounted_return = 0.0;
  int steps = 0;
  std::vector<std::int64_t> visits;
  std::int64_t frozen_visits = 0;
};

// Monte-Carlo controllability estimate: value = -E[delta^2] with actions
// drawn from the intra-option policy at `state` and transitions sampled from
// the environment. Diagnostic only; never used in the update path.
struct Controllability {
  double value = 0.0;      // always <= 0
  double std_error = 0.0;  // standard error of the mean of delta^2
  std::uint64_t samples = 0;
};

namespace detail {

// Environments that expose per-cell visit metrics.
template <typename Env>
concept GridMetricsEnv = requires(const Env& env, const typename Env::State& s,
                                  const Transition<typename Env::State>& t) {
  { env.visit_slots() } -> std::convertible_to<std::size_t>;
  { env.visit_index(s) } -> std::convertible_to<int>;
  { env.frozen_entry(t) } -> std::convertible_to<bool>;
};

}  // namespace detail

// Runs one training episode:
//   select option from the softmax policy over options, then per step sample
//   an action from the intra-option policy, step the environment, compute the
//   TD error, refresh the anchor when (state, option) matches the initial
//   pair, update critic, policy, and termination parameters in that order,
//   and on termination of the option redraw from the policy over options.
// The episode ends at an environment terminal or after step_cap steps; a
// capped episode keeps the bootstrapped (non-terminal) TD error of its last
// step and consumes no termination/option draws after it.
template <typename Env>
EpisodeRecord run_episode(Env& env, OptionParameters& params,
                          const LearnerConfig& config, Rng& rng, int step_cap) {
  EpisodeRecord record;
  if constexpr (detail::GridMetricsEnv<Env>) {
    record.visits.assign(env.visit_slots(), 0);
  }

  auto state = env.reset(rng);
  Features features = env.featurize(state);
  int option = sample_categorical(rng, policy_over_options(params, features).probs);

  EpisodeAnchor anchor;
  anchor.s0 = features;
  anchor.omega0 = option;

  double discount = 1.0;
  for (int t = 0; t < step_cap; ++t) {
    const PolicyDistribution pi = intra_option_probs(params, option, features);
    const int action = sample_categorical(rng, pi.probs);
    const Transition<typename Env::State> transition =
        env.step(state, action, rng);
    const Features next_features = env.featurize(transition.next_state);

    const double delta =
        td_error(params, config, features, action, transition.reward,
                 next_features, transition.terminal, option);
    if (option == anchor.omega0 && features == anchor.s0) {
      anchor.a0 = action;
      anchor.delta0 = delta;
      anchor.has_delta = true;
    }
    critic_update(params, features, option, action, delta, config.alpha_critic);
    actor_update(params, config, features, option, action, anchor);
    termination_update(params, config, next_features, option);

    record.discounted_return += discount * transition.reward;
    discount *= config.gamma.value();
    record.steps += 1;
    if constexpr (detail::GridMetricsEnv<Env>) {
      record.visits[static_cast<std::size_t>(
          env.visit_index(transition.next_state))] += 1;
      if (env.frozen_entry(transition)) record.frozen_visits += 1;
    }

    if (transition.terminal) break;

    if (rng.sample_uniform() < termination_prob(params, option, next_features)) {
      option = sample_categorical(
          rng, policy_over_options(params, next_features).probs);
    }
    state = transition.next_state;
    features = std::move(next_features);
  }
  return record;
}

// Monte-Carlo estimate of the controllability of (state, option): samples
// n_samples actions from the intra-option policy, steps the environment from
// `state` each time, and averages the squared TD error.
template <typename Env>
Controllability estimate_controllability(Env& env,
                                         const OptionParameters& params,
                                         const LearnerConfig& config,
                                         const typename Env::State& state,
                                         int option, std::uint64_t n_samples,
                                         Rng& rng) {
  if (n_samples < 1) {
    throw std::invalid_argument("estimate_controllability: n_samples >= 1");
  }
  const Features features = env.featurize(state);
  const PolicyDistribution pi = intra_option_probs(params, option, features);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const int action = sample_categorical(rng, pi.probs);
    const Transition<typename Env::State> transition =
        env.step(state, action, rng);
    const Features next_features = env.featurize(transition.next_state);
    const double delta =
        td_error(params, config, features, action, transition.reward,
                 next_features, transition.terminal, option);
    sum += delta * delta;
    sum_sq += delta * delta * delta * delta;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);

  Controllability result;
  result.value = -mean;
  result.std_error = n_samples > 1 ? std::sqrt(variance / n) : 0.0;
  result.samples = n_samples;
  return result;
}

}  // namespace safeoc
