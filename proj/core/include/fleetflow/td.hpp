#pragma once

#include "fleetflow/transition.hpp"
#include "fleetflow/value_model.hpp"

namespace fleetflow::value {

struct TdBreakdown {
  double target = 0.0;
  // Bootstrap-state diagnostics; valid only when bootstrapped is true.
  bool bootstrapped = false;
  double tau = 0.0;
  double entropy = 0.0;
  double quantile_value = 0.0;
};

// Multi-step chunk-level TD target: discounted chunk rewards plus, when the
// window did not hit a terminal, the adaptive-tau quantile of the value
// distribution at the bootstrap state, discounted by gamma^(effective_n * H).
// The value model is only read; no gradient flows through the target.
TdBreakdown td_target(const replay::NStepSample& sample, const ValueModel& psi,
                      const TauSchedule& sched, double gamma, int horizon,
                      nn::DenseNet::Workspace& ws);

}  // namespace fleetflow::value
