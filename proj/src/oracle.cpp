#include "safeoc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace safeoc::oracle {

bool EnumerableMdp::terminal(int state) const {
  for (const auto& per_action : arcs[static_cast<std::size_t>(state)]) {
    if (!per_action.empty()) return false;
  }
  return true;
}

std::size_t EnumerableMdp::outcome_count(int state) const {
  std::size_t count = 0;
  for (const auto& per_action : arcs[static_cast<std::size_t>(state)]) {
    for (const MdpArc& arc : per_action) {
      count += arc.rewards.size();
    }
  }
  return count;
}

EnumerableMdp parse_mdp(const std::string& text, double gamma) {
  struct Key {
    int s, a, s2;
    bool operator<(const Key& o) const {
      return std::tie(s, a, s2) < std::tie(o.s, o.a, o.s2);
    }
  };
  struct ArcData {
    double prob = 0.0;
    bool prob_set = false;
    std::vector<RewardOutcome> rewards;
  };
  std::map<Key, ArcData> table;

  int max_state = -1;
  int max_action = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int s, a, s2;
    double prob, reward, prob_r;
    if (!(fields >> s)) continue;  // blank
    if (!(fields >> a >> s2 >> prob >> reward >> prob_r)) {
      throw std::invalid_argument("mdp fixture: malformed line " +
                                  std::to_string(line_no));
    }
    if (s < 0 || a < 0 || s2 < 0 || prob < 0.0 || prob_r < 0.0) {
      throw std::invalid_argument("mdp fixture: negative field on line " +
                                  std::to_string(line_no));
    }
    ArcData& arc = table[Key{s, a, s2}];
    if (arc.prob_set && arc.prob != prob) {
      throw std::invalid_argument(
          "mdp fixture: inconsistent transition probability on line " +
          std::to_string(line_no));
    }
    arc.prob = prob;
    arc.prob_set = true;
    arc.rewards.push_back(RewardOutcome{reward, prob_r});
    max_state = std::max({max_state, s, s2});
    max_action = std::max(max_action, a);
  }
  if (table.empty()) {
    throw std::invalid_argument("mdp fixture: no transitions");
  }

  EnumerableMdp mdp;
  mdp.gamma = gamma;
  mdp.num_states = max_state + 1;
  mdp.num_actions = max_action + 1;
  mdp.arcs.assign(static_cast<std::size_t>(mdp.num_states),
                  std::vector<std::vector<MdpArc>>(
                      static_cast<std::size_t>(mdp.num_actions)));
  for (const auto& [key, data] : table) {
    double reward_mass = 0.0;
    for (const RewardOutcome& r : data.rewards) reward_mass += r.prob;
    if (std::abs(reward_mass - 1.0) > 1e-12) {
      throw std::invalid_argument("mdp fixture: reward support of (" +
                                  std::to_string(key.s) + "," +
                                  std::to_string(key.a) + "," +
                                  std::to_string(key.s2) +
                                  ") does not sum to 1");
    }
    MdpArc arc;
    arc.next_state = key.s2;
    arc.prob = data.prob;
    arc.rewards = data.rewards;
    mdp.arcs[static_cast<std::size_t>(key.s)][static_cast<std::size_t>(key.a)]
        .push_back(std::move(arc));
  }

  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.terminal(s)) continue;
    for (int a = 0; a < mdp.num_actions; ++a) {
      const auto& arcs = mdp.arcs[static_cast<std::size_t>(s)]
                                 [static_cast<std::size_t>(a)];
      if (arcs.empty()) {
        throw std::invalid_argument(
            "mdp fixture: non-terminal state " + std::to_string(s) +
            " is missing action " + std::to_string(a));
      }
      double mass = 0.0;
      for (const MdpArc& arc : arcs) mass += arc.prob;
      if (std::abs(mass - 1.0) > 1e-12) {
        throw std::invalid_argument("mdp fixture: transition row (" +
                                    std::to_string(s) + "," +
                                    std::to_string(a) +
                                    ") does not sum to 1");
      }
    }
  }
  return mdp;
}

EnumerableMdp load_mdp(const std::string& path, double gamma) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open mdp fixture: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mdp(buf.str(), gamma);
}

namespace {

// Independent recomputations over the raw parameter tables; long double
// accumulation throughout.
std::vector<long double> oracle_policy(const OptionParameters& params,
                                       int option, int state) {
  const auto feature = static_cast<std::uint32_t>(state);
  long double max_pref = -1e4932L;
  std::vector<long double> prefs(static_cast<std::size_t>(params.num_actions()));
  for (int a = 0; a < params.num_actions(); ++a) {
    prefs[static_cast<std::size_t>(a)] = params.theta(option, feature, a);
    max_pref = std::max(max_pref, prefs[static_cast<std::size_t>(a)]);
  }
  long double sum = 0.0L;
  for (auto& p : prefs) {
    p = std::exp((p - max_pref) /
                 static_cast<long double>(params.temperature()));
    sum += p;
  }
  for (auto& p : prefs) p /= sum;
  return prefs;
}

long double oracle_q_option(const OptionParameters& params, int state,
                            int option) {
  const auto feature = static_cast<std::uint32_t>(state);
  const std::vector<long double> pi = oracle_policy(params, option, state);
  long double value = 0.0L;
  for (int a = 0; a < params.num_actions(); ++a) {
    value += pi[static_cast<std::size_t>(a)] *
             static_cast<long double>(params.q_u(feature, option, a));
  }
  return value;
}

long double oracle_delta(const EnumerableMdp& mdp,
                         const OptionParameters& params, int state, int option,
                         int action, int next_state, double reward) {
  const auto feature = static_cast<std::uint32_t>(state);
  const long double q_sa = params.q_u(feature, option, action);
  if (mdp.terminal(next_state)) {
    return static_cast<long double>(reward) - q_sa;
  }
  const auto next_feature = static_cast<std::uint32_t>(next_state);
  const long double beta =
      1.0L / (1.0L + std::exp(-static_cast<long double>(
                         params.nu(option, next_feature))));
  long double best = -1e4932L;
  for (int w = 0; w < params.num_options(); ++w) {
    best = std::max(best, oracle_q_option(params, next_state, w));
  }
  const long double continue_value = oracle_q_option(params, next_state, option);
  return static_cast<long double>(reward) +
         static_cast<long double>(mdp.gamma) *
             ((1.0L - beta) * continue_value + beta * best) -
         q_sa;
}

}  // namespace

std::pair<double, double> exact_delta_moments(const EnumerableMdp& mdp,
                                              const OptionParameters& params,
                                              int state, int option) {
  if (state < 0 || state >= mdp.num_states) {
    throw std::invalid_argument("exact_delta_moments: state out of range");
  }
  if (mdp.terminal(state)) {
    throw std::invalid_argument("exact_delta_moments: state is terminal");
  }
  if (mdp.outcome_count(state) > 1000) {
    throw std::invalid_argument(
        "exact_delta_moments: MDP too large to enumerate");
  }
  if (params.num_actions() != mdp.num_actions) {
    throw std::invalid_argument(
        "exact_delta_moments: action count mismatch");
  }

  const std::vector<long double> pi = oracle_policy(params, option, state);
  long double first = 0.0L;
  long double second = 0.0L;
  for (int a = 0; a < mdp.num_actions; ++a) {
    const auto& action_arcs =
        mdp.arcs[static_cast<std::size_t>(state)][static_cast<std::size_t>(a)];
    for (const MdpArc& arc : action_arcs) {
      for (const RewardOutcome& outcome : arc.rewards) {
        const long double weight = pi[static_cast<std::size_t>(a)] *
                                   static_cast<long double>(arc.prob) *
                                   static_cast<long double>(outcome.prob);
        const long double delta = oracle_delta(mdp, params, state, option, a,
                                               arc.next_state, outcome.reward);
        first += weight * delta;
        second += weight * delta * delta;
      }
    }
  }
  return {static_cast<double>(first), static_cast<double>(second)};
}

double finite_difference(const std::function<double(double)>& objective,
                         double x, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite_difference: step must be > 0");
  }
  const double upper = objective(x + step);
  const double lower = objective(x - step);
  if (!std::isfinite(upper) || !std::isfinite(lower)) {
    throw std::domain_error("finite_difference: non-finite objective value");
  }
  return (upper - lower) / (2.0 * step);
}

double chain_value_oracle(double reward, double gamma, int length) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("chain_value_oracle: gamma must lie in [0, 1)");
  }
  if (length < 1) {
    throw std::invalid_argument("chain_value_oracle: length must be >= 1");
  }
  return std::pow(gamma, length - 1) * reward;
}

MdpSamplerEnv::MdpSamplerEnv(EnumerableMdp mdp, int start_state)
    : mdp_(std::move(mdp)), start_state_(start_state) {
  if (start_state_ < 0 || start_state_ >= mdp_.num_states) {
    throw std::invalid_argument("MdpSamplerEnv: bad start state");
  }
}

Transition<int> MdpSamplerEnv::step(const State& state, int action, Rng& rng) {
  if (state < 0 || state >= mdp_.num_states || mdp_.terminal(state)) {
    throw std::logic_error("MdpSamplerEnv::step: state is terminal");
  }
  if (action < 0 || action >= mdp_.num_actions) {
    throw std::invalid_argument("MdpSamplerEnv::step: bad action");
  }
  const auto& arcs =
      mdp_.arcs[static_cast<std::size_t>(state)][static_cast<std::size_t>(action)];

  Transition<int> t;
  t.state = state;
  t.action = action;

  double u = rng.sample_uniform();
  double cumulative = 0.0;
  const MdpArc* chosen = &arcs.back();
  for (const MdpArc& arc : arcs) {
    cumulative += arc.prob;
    if (u < cumulative) {
      chosen = &arc;
      break;
    }
  }
  t.next_state = chosen->next_state;

  u = rng.sample_uniform();
  cumulative = 0.0;
  const RewardOutcome* reward = &chosen->rewards.back();
  for (const RewardOutcome& outcome : chosen->rewards) {
    cumulative += outcome.prob;
    if (u < cumulative) {
      reward = &outcome;
      break;
    }
  }
  t.reward = reward->reward;
  t.terminal = mdp_.terminal(t.next_state);
  return t;
}

}  // namespace safeoc::oracle
