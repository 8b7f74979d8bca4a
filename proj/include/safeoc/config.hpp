#pragma once

#include <cstdint>
#include <string>

#include "safeoc/checkpoint.hpp"
#include "safeoc/learner.hpp"

namespace safeoc {

// Experiment description. Parsed from `key = value` files; every key can be
// overridden from the command line. Documented keys:
//   env          fourrooms | cartpole            (required)
//   map          path to an ASCII map file       (fourrooms; built-in default)
//   psi          controllability regularizer     (default 0)
//   gamma        discount factor in [0, 1]       (default 0.99)
//   alpha        critic step size                (default 0.1)
//   alpha_theta  intra-option policy step size   (default 0.01)
//   alpha_nu     termination step size           (default 0.01)
//   temperature  Boltzmann temperature           (default 0.001)
//   options      number of options               (default 4)
//   episodes     episodes per trial              (default 600)
//   trials       independent trials              (default 1)
//   seed         base seed; trial t uses seed+t  (default 1)
//   eval_trials  greedy evaluation episodes      (default 80)
//   step_cap     per-episode step limit          (default 500 / 200 by env)
//   out          output directory                (default "out")
// Unknown keys are rejected with an error naming the key.
struct ExperimentConfig {
  EnvKind env = EnvKind::FourRooms;
  std::string map_path;  // empty: use the built-in layout
  LearnerConfig learner;
  int episodes = 600;
  int trials = 1;
  std::uint64_t base_seed = 1;
  int eval_trials = 80;
  int step_cap = 0;  // 0: environment default
  std::string out_dir = "out";

  int effective_step_cap() const {
    if (step_cap > 0) return step_cap;
    return env == EnvKind::FourRooms ? 500 : 200;
  }
};

// Parses a config file. Throws std::invalid_argument naming the offending key
// on unknown keys, malformed values, or range violations; the `env` key is
// required.
ExperimentConfig parse_config(const std::string& path);

// Applies one key/value pair (file line or CLI override) with full
// validation.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace safeoc
