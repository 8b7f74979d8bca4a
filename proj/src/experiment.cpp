#include "safeoc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace safeoc {

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

GridMap experiment_map(const ExperimentConfig& config) {
  return config.map_path.empty() ? parse_grid_map(default_four_rooms_layout())
                                 : load_grid_map(config.map_path);
}

template <typename Env>
TrainResult train_with_env_factory(const ExperimentConfig& config,
                                   const std::function<Env()>& make_env,
                                   std::uint32_t num_features) {
  config.learner.validate();
  const int step_cap = config.effective_step_cap();

  std::vector<LearningCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(config.trials) * config.episodes);

  OptionParameters last_params(config.learner.num_options, 1, 1, 1.0);
  for (int trial = 0; trial < config.trials; ++trial) {
    Rng rng(config.base_seed + static_cast<std::uint64_t>(trial));
    Env env = make_env();
    OptionParameters params(config.learner.num_options, env.num_actions(),
                            num_features, config.learner.temperature);
    for (int episode = 0; episode < config.episodes; ++episode) {
      const EpisodeRecord record =
          run_episode(env, params, config.learner, rng, step_cap);
      rows.push_back(LearningCurveRow{trial, episode, record.discounted_return,
                                      record.steps, record.frozen_visits});
    }
    if (trial == config.trials - 1) last_params = std::move(params);
  }
  return TrainResult{std::move(rows), std::move(last_params)};
}

}  // namespace

std::vector<AggregateRow> aggregate_curves(std::span<const LearningCurveRow> rows,
                                           int episodes) {
  std::vector<AggregateRow> aggregate(static_cast<std::size_t>(episodes));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(episodes), 0);
  std::vector<double> sums(static_cast<std::size_t>(episodes), 0.0);
  std::vector<double> sq_sums(static_cast<std::size_t>(episodes), 0.0);
  for (const LearningCurveRow& row : rows) {
    if (row.episode < 0 || row.episode >= episodes) {
      throw std::invalid_argument("aggregate_curves: episode out of range");
    }
    const auto e = static_cast<std::size_t>(row.episode);
    counts[e] += 1;
    sums[e] += row.discounted_return;
    sq_sums[e] += row.discounted_return * row.discounted_return;
  }
  for (int e = 0; e < episodes; ++e) {
    const auto i = static_cast<std::size_t>(e);
    aggregate[i].episode = e;
    const double n = static_cast<double>(counts[i]);
    if (counts[i] == 0) continue;
    aggregate[i].mean = sums[i] / n;
    if (counts[i] > 1) {
      const double centered = sq_sums[i] - sums[i] * sums[i] / n;
      aggregate[i].std_dev = std::sqrt(std::max(0.0, centered / (n - 1.0)));
    }
  }
  return aggregate;
}

TrainResult train_trials(const ExperimentConfig& config) {
  if (config.env == EnvKind::FourRooms) {
    const GridMap map = experiment_map(config);
    FourRoomsConfig env_config;
    env_config.step_cap = config.effective_step_cap();
    const auto features = static_cast<std::uint32_t>(map.width * map.height);
    return train_with_env_factory<FourRoomsEnv>(
        config, [&] { return FourRoomsEnv(map, env_config); }, features);
  }
  CartPoleConfig env_config;
  env_config.step_cap = config.effective_step_cap();
  const TileCoder coder = TileCoder::cart_pole_default();
  return train_with_env_factory<TiledCartPole>(
      config, [&] { return TiledCartPole(env_config, coder); },
      coder.table_size());
}

std::string render_policy(const OptionParameters& params, const GridMap& map) {
  std::string out;
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      if (c > 0) out.push_back(' ');
      switch (map.at(r, c)) {
        case Cell::Wall:
          out.push_back('#');
          break;
        case Cell::Goal:
          out.push_back('G');
          break;
        case Cell::Frozen:
          out.push_back('F');
          break;
        case Cell::Normal: {
          const Features features = {
              static_cast<std::uint32_t>(map.index(r, c))};
          const std::vector<double> q = q_omega_values(params, features);
          const int option = static_cast<int>(
              std::max_element(q.begin(), q.end()) - q.begin());
          const PolicyDistribution pi =
              intra_option_probs(params, option, features);
          const int action = static_cast<int>(
              std::max_element(pi.probs.begin(), pi.probs.end()) -
              pi.probs.begin());
          out.push_back(four_rooms_action_letter(action));
          out += std::to_string(option);
          break;
        }
      }
    }
    out.push_back('\n');
  }
  return out;
}

void write_curves_csv(const std::string& path,
                      std::span<const LearningCurveRow> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "trial,episode,discounted_return,steps,frozen_visits\n";
  for (const LearningCurveRow& row : rows) {
    out << row.trial << ',' << row.episode << ','
        << format_double(row.discounted_return) << ',' << row.steps << ','
        << row.frozen_visits << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing " + path);
}

void write_aggregate_csv(const std::string& path,
                         std::span<const AggregateRow> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "episode,mean,std\n";
  for (const AggregateRow& row : rows) {
    out << row.episode << ',' << format_double(row.mean) << ','
        << format_double(row.std_dev) << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing " + path);
}

void write_visits_csv(const std::string& path,
                      std::span<const std::int64_t> visits, int width,
                      int height) {
  if (static_cast<std::size_t>(width) * height != visits.size()) {
    throw std::invalid_argument("write_visits_csv: grid size mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (c > 0) out << ',';
      out << visits[static_cast<std::size_t>(r) * width + c];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing " + path);
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  TrainResult trained = train_trials(config);
  const int step_cap = config.effective_step_cap();

  Rng eval_rng(config.base_seed + kEvalSeedOffset);
  EvalResult eval;
  std::string policy_text;
  Checkpoint checkpoint{config.env,
                        GridMap{},
                        0,
                        {},
                        {},
                        trained.params};
  if (config.env == EnvKind::FourRooms) {
    const GridMap map = experiment_map(config);
    FourRoomsConfig env_config;
    env_config.step_cap = step_cap;
    FourRoomsEnv env(map, env_config);
    eval = evaluate_greedy(env, trained.params, config.learner.gamma, step_cap,
                           config.eval_trials, eval_rng);
    policy_text = render_policy(trained.params, map);
    checkpoint.map = map;
  } else {
    CartPoleConfig env_config;
    env_config.step_cap = step_cap;
    const TileCoder coder = TileCoder::cart_pole_default();
    TiledCartPole env(env_config, coder);
    eval = evaluate_greedy(env, trained.params, config.learner.gamma, step_cap,
                           config.eval_trials, eval_rng);
    checkpoint.tilings = coder.tilings();
    checkpoint.bins = coder.bins();
    checkpoint.ranges = coder.ranges();
  }

  const std::filesystem::path out_dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " +
                             config.out_dir);
  }

  RunArtifacts artifacts{std::move(trained.rows),
                         {},
                         std::move(eval),
                         std::move(policy_text),
                         std::move(checkpoint)};
  artifacts.aggregate = aggregate_curves(artifacts.rows, config.episodes);

  write_curves_csv((out_dir / "curves.csv").string(), artifacts.rows);
  write_aggregate_csv((out_dir / "curves_agg.csv").string(),
                      artifacts.aggregate);
  save_checkpoint((out_dir / "checkpoint.txt").string(), artifacts.checkpoint);
  if (config.env == EnvKind::FourRooms) {
    write_visits_csv((out_dir / "visits.csv").string(), artifacts.eval.visits,
                     artifacts.checkpoint.map.width,
                     artifacts.checkpoint.map.height);
    std::ofstream policy((out_dir / "policy.txt").string());
    if (!policy) {
      throw std::runtime_error("cannot write " +
                               (out_dir / "policy.txt").string());
    }
    policy << artifacts.policy_text;
  }
  return artifacts;
}

}  // namespace safeoc
