#pragma once

#include <stdexcept>

namespace safeoc {

// One environment interaction record.
template <typename State>
struct Transition {
  State state{};
  int action = 0;
  double reward = 0.0;
  State next_state{};
  bool terminal = false;
};

// Discount factor constrained to [0, 1].
class DiscountFactor {
 public:
  explicit DiscountFactor(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw std::invalid_argument("DiscountFactor: gamma must lie in [0, 1]");
    }
  }

  double value() const { return gamma_; }

 private:
  double gamma_;
};

}  // namespace safeoc
