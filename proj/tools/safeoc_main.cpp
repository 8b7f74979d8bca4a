#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "safeoc/experiment.hpp"

namespace {

int run_train(const std::string& config_path,
              const std::vector<std::pair<std::string, std::string>>& overrides) {
  safeoc::ExperimentConfig config = safeoc::parse_config(config_path);
  for (const auto& [key, value] : overrides) {
    safeoc::apply_config_entry(config, key, value);
  }
  config.learner.validate();

  const safeoc::RunArtifacts artifacts = safeoc::run_experiment(config);
  const auto& aggregate = artifacts.aggregate;
  std::printf("trained %d trial(s) x %d episode(s); wrote %s\n", config.trials,
              config.episodes, config.out_dir.c_str());
  if (!aggregate.empty()) {
    const auto& last = aggregate.back();
    std::printf("final episode: mean return %.4f (std %.4f)\n", last.mean,
                last.std_dev);
  }
  return 0;
}

int run_eval(const std::string& checkpoint_path, int trials,
             const std::string& out_dir) {
  const safeoc::Checkpoint checkpoint =
      safeoc::load_checkpoint(checkpoint_path);

  const std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " + out_dir);
  }

  safeoc::Rng rng(safeoc::kEvalSeedOffset);
  safeoc::EvalResult result;
  safeoc::DiscountFactor gamma(0.99);
  if (checkpoint.env_kind == safeoc::EnvKind::FourRooms) {
    safeoc::FourRoomsEnv env(checkpoint.map);
    result = safeoc::evaluate_greedy(env, checkpoint.params, gamma,
                                     env.step_cap(), trials, rng);
    safeoc::write_visits_csv((out / "visits.csv").string(), result.visits,
                             checkpoint.map.width, checkpoint.map.height);
  } else {
    safeoc::TiledCartPole env(safeoc::CartPoleConfig{},
                              checkpoint.make_coder());
    result = safeoc::evaluate_greedy(env, checkpoint.params, gamma,
                                     env.step_cap(), trials, rng);
  }

  std::ofstream returns((out / "eval_returns.csv").string());
  if (!returns) {
    throw std::runtime_error("cannot write eval_returns.csv in " + out_dir);
  }
  returns << "trial,discounted_return\n";
  for (std::size_t i = 0; i < result.returns.size(); ++i) {
    returns << i << ',' << result.returns[i] << '\n';
  }

  double mean = 0.0;
  for (double r : result.returns) mean += r;
  if (!result.returns.empty()) mean /= static_cast<double>(result.returns.size());
  std::printf("evaluated %d trial(s): mean return %.4f, steps %lld, frozen visits %lld\n",
              trials, mean, static_cast<long long>(result.total_steps),
              static_cast<long long>(result.frozen_visits));
  return 0;
}

int run_render(const std::string& checkpoint_path, const std::string& map_path) {
  const safeoc::Checkpoint checkpoint =
      safeoc::load_checkpoint(checkpoint_path);
  const safeoc::GridMap map = map_path.empty()
                                  ? checkpoint.map
                                  : safeoc::load_grid_map(map_path);
  if (map.cells.empty()) {
    throw std::runtime_error("render-policy: no map available");
  }
  std::cout << safeoc::render_policy(checkpoint.params, map);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe option-critic training and evaluation"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train an agent from a config file");
  std::string config_path;
  train->add_option("--config", config_path, "config file (key = value lines)")
      ->required();
  struct Flag {
    std::string key;
    std::string cli;
    std::string value;
    CLI::Option* option = nullptr;
  };
  std::vector<Flag> flags = {
      {"env", "--env", "", nullptr},
      {"psi", "--psi", "", nullptr},
      {"gamma", "--gamma", "", nullptr},
      {"alpha", "--alpha", "", nullptr},
      {"alpha_theta", "--alpha-theta", "", nullptr},
      {"alpha_nu", "--alpha-nu", "", nullptr},
      {"temperature", "--temperature", "", nullptr},
      {"options", "--options", "", nullptr},
      {"episodes", "--episodes", "", nullptr},
      {"trials", "--trials", "", nullptr},
      {"seed", "--seed", "", nullptr},
      {"eval_trials", "--eval-trials", "", nullptr},
      {"step_cap", "--step-cap", "", nullptr},
      {"map", "--map", "", nullptr},
      {"out", "--out", "", nullptr},
  };
  for (Flag& flag : flags) {
    flag.option = train->add_option(flag.cli, flag.value,
                                    "override config key '" + flag.key + "'");
  }

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a trained checkpoint");
  std::string checkpoint_path;
  int eval_trials = 80;
  std::string eval_out = "out";
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")
      ->required();
  eval->add_option("--trials", eval_trials, "evaluation episodes");
  eval->add_option("--out", eval_out, "output directory");

  // render-policy
  auto* render = app.add_subcommand("render-policy",
                                    "print the greedy policy as a text grid");
  std::string render_checkpoint;
  std::string render_map;
  render->add_option("--checkpoint", render_checkpoint, "checkpoint file")
      ->required();
  render->add_option("--map", render_map, "map file (defaults to the checkpoint's map)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (const Flag& flag : flags) {
        if (flag.option->count() > 0) overrides.emplace_back(flag.key, flag.value);
      }
      return run_train(config_path, overrides);
    }
    if (eval->parsed()) {
      return run_eval(checkpoint_path, eval_trials, eval_out);
    }
    return run_render(render_checkpoint, render_map);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
