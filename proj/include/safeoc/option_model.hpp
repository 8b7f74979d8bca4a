#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "safeoc/features.hpp"

namespace safeoc {

// Probability vector over actions or options: entries nonnegative, sum 1.
struct PolicyDistribution {
  std::vector<double> probs;
};

// Option parameter tables: intra-option policy preferences theta, termination
// preferences nu, and the critic Q_U, all linear in active features. Tabular
// settings are the one-active-feature special case. All tables start at zero,
// so policies begin uniform and terminations begin at 0.5.
class OptionParameters {
 public:
  OptionParameters(int num_options, int num_actions, std::uint32_t num_features,
                   double temperature);

  int num_options() const { return num_options_; }
  int num_actions() const { return num_actions_; }
  std::uint32_t num_features() const { return num_features_; }
  double temperature() const { return temperature_; }

  double theta(int option, std::uint32_t feature, int action) const {
    return theta_[theta_index(option, feature, action)];
  }
  double& theta(int option, std::uint32_t feature, int action) {
    return theta_[theta_index(option, feature, action)];
  }
  double nu(int option, std::uint32_t feature) const {
    return nu_[nu_index(option, feature)];
  }
  double& nu(int option, std::uint32_t feature) {
    return nu_[nu_index(option, feature)];
  }
  double q_u(std::uint32_t feature, int option, int action) const {
    return q_u_[q_u_index(feature, option, action)];
  }
  double& q_u(std::uint32_t feature, int option, int action) {
    return q_u_[q_u_index(feature, option, action)];
  }

  std::span<const double> theta_table() const { return theta_; }
  std::span<const double> nu_table() const { return nu_; }
  std::span<const double> q_u_table() const { return q_u_; }
  std::span<double> theta_table() { return theta_; }
  std::span<double> nu_table() { return nu_; }
  std::span<double> q_u_table() { return q_u_; }

  // Copy with a different Boltzmann temperature (used for greedy evaluation).
  OptionParameters with_temperature(double temperature) const;

 private:
  std::size_t theta_index(int option, std::uint32_t feature, int action) const {
    return (static_cast<std::size_t>(option) * num_features_ + feature) *
               num_actions_ +
           static_cast<std::size_t>(action);
  }
  std::size_t nu_index(int option, std::uint32_t feature) const {
    return static_cast<std::size_t>(option) * num_features_ + feature;
  }
  std::size_t q_u_index(std::uint32_t feature, int option, int action) const {
    return (static_cast<std::size_t>(feature) * num_options_ + option) *
               num_actions_ +
           static_cast<std::size_t>(action);
  }

  int num_options_;
  int num_actions_;
  std::uint32_t num_features_;
  double temperature_;
  std::vector<double> theta_;
  std::vector<double> nu_;
  std::vector<double> q_u_;
};

// Boltzmann intra-option policy: softmax of theta[option, state, .] at the
// configured temperature, stabilized by subtracting the maximum preference
// before exponentiation. Non-finite preferences raise std::domain_error.
PolicyDistribution intra_option_probs(const OptionParameters& params,
                                      int option,
                                      std::span<const std::uint32_t> state);

// Sigmoid termination probability of `option` at `state`.
double termination_prob(const OptionParameters& params, int option,
                        std::span<const std::uint32_t> state);

// Linear critic value Q_U(state, option, action).
double q_u_value(const OptionParameters& params,
                 std::span<const std::uint32_t> state, int option, int action);

// Q over options: expectation of Q_U under the intra-option policy.
double q_omega(const OptionParameters& params,
               std::span<const std::uint32_t> state, int option);

// q_omega for every option at once.
std::vector<double> q_omega_values(const OptionParameters& params,
                                   std::span<const std::uint32_t> state);

// State value: expectation of q_omega under the policy over options.
double v_omega(const OptionParameters& params,
               std::span<const std::uint32_t> state);

// Boltzmann policy over options: softmax of the q_omega values.
PolicyDistribution policy_over_options(const OptionParameters& params,
                                       std::span<const std::uint32_t> state);

// Gradient of log pi(action | state, option) with respect to theta. For the
// linear softmax the derivative w.r.t. theta(option, i, a') equals coeff[a']
// for every active feature i and is zero elsewhere:
//   coeff[a'] = (1[a'==action] - pi(a'|state,option)) / temperature.
struct GradLogPolicy {
  std::vector<double> coeff;
};

GradLogPolicy grad_log_intra_option(const OptionParameters& params, int option,
                                    std::span<const std::uint32_t> state,
                                    int action);

}  // namespace safeoc
