#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "safeoc/cart_pole.hpp"
#include "safeoc/checkpoint.hpp"
#include "safeoc/config.hpp"
#include "safeoc/four_rooms.hpp"
#include "safeoc/learner.hpp"

namespace safeoc {

// One learning-curve sample, one per (trial, episode).
struct LearningCurveRow {
  int trial = 0;
  int episode = 0;
  double discounted_return = 0.0;
  int steps = 0;
  std::int64_t frozen_visits = 0;
};

struct AggregateRow {
  int episode = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

// Per-episode mean and standard deviation across trials (sample std, zero for
// a single trial). Order of the input rows does not matter.
std::vector<AggregateRow> aggregate_curves(std::span<const LearningCurveRow> rows,
                                           int episodes);

struct TrainResult {
  std::vector<LearningCurveRow> rows;
  OptionParameters params;  // trained parameters of the last trial
};

// Trains `config.trials` independent learners (trial t is seeded with
// base_seed + t and starts from scratch) and records one row per episode.
TrainResult train_trials(const ExperimentConfig& config);

struct EvalResult {
  std::vector<std::int64_t> visits;  // per-cell occupancy, grid envs only
  std::vector<double> returns;       // discounted return per evaluation episode
  std::int64_t frozen_visits = 0;
  std::int64_t total_steps = 0;
};

// Runs evaluation episodes with a near-greedy (temperature 1e-3) Boltzmann
// policy and no learning, accumulating visit counts and returns.
template <typename Env>
EvalResult evaluate_greedy(Env& env, const OptionParameters& trained,
                           DiscountFactor gamma, int step_cap, int trials,
                           Rng& rng) {
  const OptionParameters params = trained.with_temperature(1e-3);
  EvalResult result;
  if constexpr (detail::GridMetricsEnv<Env>) {
    result.visits.assign(env.visit_slots(), 0);
  }
  for (int trial = 0; trial < trials; ++trial) {
    auto state = env.reset(rng);
    Features features = env.featurize(state);
    int option =
        sample_categorical(rng, policy_over_options(params, features).probs);
    double episode_return = 0.0;
    double discount = 1.0;
    for (int t = 0; t < step_cap; ++t) {
      const int action =
          sample_categorical(rng, intra_option_probs(params, option, features).probs);
      const Transition<typename Env::State> transition =
          env.step(state, action, rng);
      const Features next_features = env.featurize(transition.next_state);
      episode_return += discount * transition.reward;
      discount *= gamma.value();
      result.total_steps += 1;
      if constexpr (detail::GridMetricsEnv<Env>) {
        result.visits[static_cast<std::size_t>(
            env.visit_index(transition.next_state))] += 1;
        if (env.frozen_entry(transition)) result.frozen_visits += 1;
      }
      if (transition.terminal) break;
      if (rng.sample_uniform() <
          termination_prob(params, option, next_features)) {
        option = sample_categorical(
            rng, policy_over_options(params, next_features).probs);
      }
      state = transition.next_state;
      features = std::move(next_features);
    }
    result.returns.push_back(episode_return);
  }
  return result;
}

// Greedy-policy text render: one token per map cell, space separated. Walls
// print '#', the goal 'G', frozen cells 'F'; every other cell prints the
// greedy action letter followed by the greedy option id, e.g. "R0".
std::string render_policy(const OptionParameters& params, const GridMap& map);

// Complete artifact bundle of one experiment run.
struct RunArtifacts {
  std::vector<LearningCurveRow> rows;
  std::vector<AggregateRow> aggregate;
  EvalResult eval;
  std::string policy_text;  // fourrooms only
  Checkpoint checkpoint;
};

// Trains, evaluates, and writes all output files into config.out_dir:
// curves.csv, curves_agg.csv, checkpoint.txt, and for the gridworld also
// visits.csv plus policy.txt. Evaluation randomness is seeded with
// base_seed + kEvalSeedOffset so training and evaluation streams never alias.
RunArtifacts run_experiment(const ExperimentConfig& config);

inline constexpr std::uint64_t kEvalSeedOffset = 1ULL << 32;

// CSV writers (used by run_experiment; exposed for tests and tools).
void write_curves_csv(const std::string& path,
                      std::span<const LearningCurveRow> rows);
void write_aggregate_csv(const std::string& path,
                         std::span<const AggregateRow> rows);
void write_visits_csv(const std::string& path,
                      std::span<const std::int64_t> visits, int width,
                      int height);

}  // namespace safeoc
