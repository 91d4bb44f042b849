#include "fleetflow/adam.hpp"

#include <cmath>

#include "fleetflow/errors.hpp"

namespace fleetflow::nn {

AdamState AdamState::init(LayoutPtr layout, AdamConfig cfg) {
  AdamState s;
  s.m = ParamVector::zeros(layout);
  s.v = ParamVector::zeros(std::move(layout));
  s.config = cfg;
  return s;
}

void opt_step(ParamVector& params, const ParamVector& grads, AdamState& state,
              double lr) {
  check_same_layout(params, grads, "opt_step");
  check_same_layout(params, state.m, "opt_step(state)");
  const AdamConfig& c = state.config;
  state.step += 1;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const double g = grads.values[i];
    double& m = state.m.values[i];
    double& v = state.v.values[i];
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g * g;
    const double mhat = m / bc1;
    const double vhat = v / bc2;
    params.values[i] -= lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

double cosine_lr(double base_lr, long step, long total_steps,
                 double floor_frac) {
  if (total_steps <= 0) return base_lr;
  const double t =
      std::min(1.0, static_cast<double>(step) / static_cast<double>(total_steps));
  const double cosine = 0.5 * (1.0 + std::cos(M_PI * t));
  return base_lr * (floor_frac + (1.0 - floor_frac) * cosine);
}

}  // namespace fleetflow::nn
