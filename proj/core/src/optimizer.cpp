#include "dfire/optimizer.hpp"

#include <cmath>

namespace dfire {

AdamWOutcome adamw_update(const OptimizerState& state, const ModelParams& params,
                          const ParamGradient& grad) {
  AdamWOutcome out{state, params, grad.finite()};
  if (!out.accepted) return out;

  const AdamWConfig& cfg = state.config;
  OptimizerState& s = out.state;
  s.step += 1;
  const double t = static_cast<double>(s.step);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);

  const std::array<double, 4> g{grad.c1, grad.c2, grad.a, grad.p_h};
  std::array<double*, 4> p{&out.params.c1, &out.params.c2, &out.params.a, &out.params.p_h};
  for (std::size_t i = 0; i < 4; ++i) {
    *p[i] -= cfg.learning_rate * cfg.weight_decay * *p[i];
    s.first_moment[i] = cfg.beta1 * s.first_moment[i] + (1.0 - cfg.beta1) * g[i];
    s.second_moment[i] = cfg.beta2 * s.second_moment[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = s.first_moment[i] / bias1;
    const double v_hat = s.second_moment[i] / bias2;
    *p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
  return out;
}

}  // namespace dfire
