#include "safeoc/option_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace safeoc {

OptionParameters::OptionParameters(int num_options, int num_actions,
                                   std::uint32_t num_features,
                                   double temperature)
    : num_options_(num_options),
      num_actions_(num_actions),
      num_features_(num_features),
      temperature_(temperature) {
  if (num_options_ < 1 || num_actions_ < 1 || num_features_ < 1) {
    throw std::invalid_argument("OptionParameters: counts must be >= 1");
  }
  if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
    throw std::invalid_argument("OptionParameters: temperature must be > 0");
  }
  const std::size_t sa = static_cast<std::size_t>(num_options_) *
                         num_features_ * num_actions_;
  theta_.assign(sa, 0.0);
  nu_.assign(static_cast<std::size_t>(num_options_) * num_features_, 0.0);
  q_u_.assign(sa, 0.0);
}

OptionParameters OptionParameters::with_temperature(double temperature) const {
  OptionParameters copy = *this;
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("with_temperature: temperature must be > 0");
  }
  copy.temperature_ = temperature;
  return copy;
}

namespace {

void check_option(const OptionParameters& params, int option) {
  if (option < 0 || option >= params.num_options()) {
    throw std::invalid_argument("option index out of range");
  }
}

// Stabilized softmax of preferences/temperature.
PolicyDistribution softmax(std::span<const double> preferences,
                           double temperature) {
  double max_pref = -std::numeric_limits<double>::infinity();
  for (double p : preferences) {
    if (!std::isfinite(p)) {
      throw std::domain_error("softmax: non-finite preference");
    }
    max_pref = std::max(max_pref, p);
  }
  PolicyDistribution dist;
  dist.probs.resize(preferences.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < preferences.size(); ++i) {
    dist.probs[i] = std::exp((preferences[i] - max_pref) / temperature);
    sum += dist.probs[i];
  }
  for (double& p : dist.probs) {
    p /= sum;
  }
  return dist;
}

}  // namespace

PolicyDistribution intra_option_probs(const OptionParameters& params,
                                      int option,
                                      std::span<const std::uint32_t> state) {
  check_option(params, option);
  std::vector<double> prefs(static_cast<std::size_t>(params.num_actions()), 0.0);
  for (int a = 0; a < params.num_actions(); ++a) {
    for (std::uint32_t i : state) {
      prefs[static_cast<std::size_t>(a)] += params.theta(option, i, a);
    }
  }
  return softmax(prefs, params.temperature());
}

double termination_prob(const OptionParameters& params, int option,
                        std::span<const std::uint32_t> state) {
  check_option(params, option);
  double preference = 0.0;
  for (std::uint32_t i : state) {
    preference += params.nu(option, i);
  }
  return 1.0 / (1.0 + std::exp(-preference));
}

double q_u_value(const OptionParameters& params,
                 std::span<const std::uint32_t> state, int option, int action) {
  double value = 0.0;
  for (std::uint32_t i : state) {
    value += params.q_u(i, option, action);
  }
  return value;
}

double q_omega(const OptionParameters& params,
               std::span<const std::uint32_t> state, int option) {
  const PolicyDistribution pi = intra_option_probs(params, option, state);
  double value = 0.0;
  for (int a = 0; a < params.num_actions(); ++a) {
    value += pi.probs[static_cast<std::size_t>(a)] *
             q_u_value(params, state, option, a);
  }
  return value;
}

std::vector<double> q_omega_values(const OptionParameters& params,
                                   std::span<const std::uint32_t> state) {
  std::vector<double> values(static_cast<std::size_t>(params.num_options()));
  for (int w = 0; w < params.num_options(); ++w) {
    values[static_cast<std::size_t>(w)] = q_omega(params, state, w);
  }
  return values;
}

double v_omega(const OptionParameters& params,
               std::span<const std::uint32_t> state) {
  const std::vector<double> q = q_omega_values(params, state);
  const PolicyDistribution pi = softmax(q, params.temperature());
  double value = 0.0;
  for (std::size_t w = 0; w < q.size(); ++w) {
    value += pi.probs[w] * q[w];
  }
  return value;
}

PolicyDistribution policy_over_options(const OptionParameters& params,
                                       std::span<const std::uint32_t> state) {
  return softmax(q_omega_values(params, state), params.temperature());
}

GradLogPolicy grad_log_intra_option(const OptionParameters& params, int option,
                                    std::span<const std::uint32_t> state,
                                    int action) {
  if (action < 0 || action >= params.num_actions()) {
    throw std::invalid_argument("grad_log_intra_option: bad action index");
  }
  const PolicyDistribution pi = intra_option_probs(params, option, state);
  GradLogPolicy grad;
  grad.coeff.resize(pi.probs.size());
  for (std::size_t a = 0; a < pi.probs.size(); ++a) {
    const double indicator = static_cast<int>(a) == action ? 1.0 : 0.0;
    grad.coeff[a] = (indicator - pi.probs[a]) / params.temperature();
  }
  return grad;
}

}  // namespace safeoc
