#include "fleetflow/td.hpp"

#include <cmath>

namespace fleetflow::value {

TdBreakdown td_target(const replay::NStepSample& sample, const ValueModel& psi,
                      const TauSchedule& sched, double gamma, int horizon,
                      nn::DenseNet::Workspace& ws) {
  if (sample.effective_n < 1 ||
      sample.chunk_rewards.size() != static_cast<std::size_t>(sample.effective_n))
    throw ContractError("td_target: malformed n-step sample");

  TdBreakdown out;
  for (int i = 0; i < sample.effective_n; ++i)
    out.target += std::pow(gamma, static_cast<double>(i) * horizon) *
                  sample.chunk_rewards[i];
  if (!sample.bootstrap_obs.has_value()) return out;

  const double discount =
      std::pow(gamma, static_cast<double>(sample.effective_n) * horizon);
  out.bootstrapped = true;
  if (psi.mode() == ValueModel::Mode::distributional) {
    const CategoricalValueDistribution dist =
        psi.distribution(*sample.bootstrap_obs, ws);
    out.entropy = normalized_entropy(dist);
    out.tau = adaptive_tau(dist, sched);
    out.quantile_value = quantile(dist, out.tau);
  } else {
    out.tau = sched.tau_base;
    out.entropy = 0.0;
    out.quantile_value = psi.scalar_value(*sample.bootstrap_obs, ws);
  }
  out.target += discount * out.quantile_value;
  return out;
}

}  // namespace fleetflow::value
