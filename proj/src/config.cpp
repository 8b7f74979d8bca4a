#include "safeoc/config.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace safeoc {

namespace {

std::string trim(const std::string& s) {
  const std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' has malformed numeric value '" + value +
                                "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config: key '" + key +
                                "' has malformed integer value '" + value +
                                "'");
  }
  return parsed;
}

double parse_positive(const std::string& key, const std::string& value) {
  const double parsed = parse_double(key, value);
  if (!(parsed > 0.0)) {
    throw std::invalid_argument("config: key '" + key + "' must be > 0");
  }
  return parsed;
}

int parse_count(const std::string& key, const std::string& value, int min) {
  const std::int64_t parsed = parse_int(key, value);
  if (parsed < min || parsed > 1'000'000'000) {
    throw std::invalid_argument("config: key '" + key + "' must be >= " +
                                std::to_string(min));
  }
  return static_cast<int>(parsed);
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "env") {
    config.env = env_kind_from_name(value);
  } else if (key == "map") {
    config.map_path = value;
  } else if (key == "psi") {
    const double psi = parse_double(key, value);
    if (psi < 0.0) {
      throw std::invalid_argument("config: key 'psi' must be >= 0");
    }
    config.learner.psi = psi;
  } else if (key == "gamma") {
    const double gamma = parse_double(key, value);
    if (gamma < 0.0 || gamma > 1.0) {
      throw std::invalid_argument(
          "config: key 'gamma' must lie in [0, 1], got " + value);
    }
    config.learner.gamma = DiscountFactor(gamma);
  } else if (key == "alpha") {
    config.learner.alpha_critic = parse_positive(key, value);
  } else if (key == "alpha_theta") {
    config.learner.alpha_theta = parse_positive(key, value);
  } else if (key == "alpha_nu") {
    config.learner.alpha_nu = parse_positive(key, value);
  } else if (key == "temperature") {
    config.learner.temperature = parse_positive(key, value);
  } else if (key == "options") {
    config.learner.num_options = parse_count(key, value, 1);
  } else if (key == "episodes") {
    config.episodes = parse_count(key, value, 1);
  } else if (key == "trials") {
    config.trials = parse_count(key, value, 1);
  } else if (key == "seed") {
    const std::int64_t seed = parse_int(key, value);
    if (seed < 0) {
      throw std::invalid_argument("config: key 'seed' must be >= 0");
    }
    config.base_seed = static_cast<std::uint64_t>(seed);
  } else if (key == "eval_trials") {
    config.eval_trials = parse_count(key, value, 0);
  } else if (key == "step_cap") {
    config.step_cap = parse_count(key, value, 1);
  } else if (key == "out") {
    config.out_dir = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }

  ExperimentConfig config;
  bool env_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not of the form 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " has an empty key or value");
    }
    apply_config_entry(config, key, value);
    if (key == "env") env_seen = true;
  }
  if (!env_seen) {
    throw std::invalid_argument("config: missing required key 'env'");
  }
  config.learner.validate();
  return config;
}

}  // namespace safeoc
