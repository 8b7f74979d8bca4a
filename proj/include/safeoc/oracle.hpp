#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "safeoc/features.hpp"
#include "safeoc/learner.hpp"
#include "safeoc/option_model.hpp"
#include "safeoc/rng.hpp"
#include "safeoc/transition.hpp"

// Brute-force oracles used by the test suites. Everything here recomputes
// quantities from first principles (own softmax, own sigmoid, exhaustive
// enumeration) so it stays independent of the learner code paths it checks.
namespace safeoc::oracle {

struct RewardOutcome {
  double reward = 0.0;
  double prob = 0.0;
};

struct MdpArc {
  int next_state = 0;
  double prob = 0.0;
  std::vector<RewardOutcome> rewards;  // finite support, probs sum to 1
};

// Fully enumerable MDP. A state with no outgoing arcs for any action is
// terminal (absorbing). Every non-terminal state must define every action.
struct EnumerableMdp {
  int num_states = 0;
  int num_actions = 0;
  double gamma = 0.99;
  // arcs[s][a] lists the possible next states with their reward supports.
  std::vector<std::vector<std::vector<MdpArc>>> arcs;

  bool terminal(int state) const;
  std::size_t outcome_count(int state) const;
};

// Parses the fixture format: one outcome per line,
//   s a s' prob reward prob_r
// with '#' comments and blank lines ignored. Lines sharing (s, a, s') build
// up that arc's reward support. Transition rows must sum to 1 within 1e-12,
// as must each reward support. `gamma` is supplied by the caller.
EnumerableMdp load_mdp(const std::string& path, double gamma);
EnumerableMdp parse_mdp(const std::string& text, double gamma);

// Exact first and second moments (E[delta], E[delta^2]) of the one-step TD
// error at (state, option), enumerating every (action, next state, reward)
// outcome weighted by pi(a|s,option) * P(s'|s,a) * P(r). Rejects MDPs with
// more than 1000 outcome triples at the queried state.
std::pair<double, double> exact_delta_moments(const EnumerableMdp& mdp,
                                              const OptionParameters& params,
                                              int state, int option);

// Central difference (f(x+h) - f(x-h)) / 2h. Throws std::domain_error when
// either evaluation is non-finite; step must be > 0.
double finite_difference(const std::function<double(double)>& objective,
                         double x, double step);

// Discounted return of a deterministic chain of the given length whose only
// reward arrives on the final, terminal step: gamma^(length-1) * reward.
double chain_value_oracle(double reward, double gamma, int length);

// Samples transitions of an EnumerableMdp so the Monte-Carlo estimator can
// run against the exact enumeration. Consumes one draw for the next state and
// one for the reward outcome on every step.
class MdpSamplerEnv {
 public:
  using State = int;

  explicit MdpSamplerEnv(EnumerableMdp mdp, int start_state = 0);

  State reset(Rng&) { return start_state_; }
  Transition<State> step(const State& state, int action, Rng& rng);
  int num_actions() const { return mdp_.num_actions; }
  int num_states() const { return mdp_.num_states; }
  Features featurize(State s) const { return {static_cast<std::uint32_t>(s)}; }
  const EnumerableMdp& mdp() const { return mdp_; }

 private:
  EnumerableMdp mdp_;
  int start_state_;
};

}  // namespace safeoc::oracle
