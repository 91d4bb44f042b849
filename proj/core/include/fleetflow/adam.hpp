#pragma once

#include "fleetflow/param_vector.hpp"

namespace fleetflow::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  ParamVector m;
  ParamVector v;
  long step = 0;
  AdamConfig config;

  static AdamState init(LayoutPtr layout, AdamConfig cfg = {});
};

// One bias-corrected moment-smoothed descent step at the given learning rate.
void opt_step(ParamVector& params, const ParamVector& grads, AdamState& state,
              double lr);

// Cosine decay from base_lr toward floor_frac * base_lr over total steps.
double cosine_lr(double base_lr, long step, long total_steps,
                 double floor_frac);

}  // namespace fleetflow::nn
