#pragma once

#include <array>
#include <cstdint>

#include "dfire/model.hpp"
#include "dfire/tape.hpp"

namespace dfire {

struct AdamWConfig {
  double learning_rate = 5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
};

/// Moment estimates in (c1, c2, a, p_h) order.
struct OptimizerState {
  AdamWConfig config;
  std::array<double, 4> first_moment{};
  std::array<double, 4> second_moment{};
  std::int64_t step = 0;
};

struct AdamWOutcome {
  OptimizerState state;
  ModelParams params;
  bool accepted = true;  // false when the gradient was rejected as non-finite
};

/// Adam with decoupled weight decay and bias correction. p_continue is never
/// touched. A non-finite gradient leaves state and params unchanged.
AdamWOutcome adamw_update(const OptimizerState& state, const ModelParams& params,
                          const ParamGradient& grad);

}  // namespace dfire
