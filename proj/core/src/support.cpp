#include "fleetflow/support.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::value {

void CategoricalValueDistribution::validate() const {
  support.validate();
  if (probs.size() != static_cast<std::size_t>(support.atoms))
    throw ContractError("CategoricalValueDistribution: probs/support size mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ContractError("CategoricalValueDistribution: negative mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ContractError("CategoricalValueDistribution: mass not normalized");
}

CategoricalValueDistribution c51_project(double target,
                                         const ValueSupport& support) {
  support.validate();
  if (!std::isfinite(target)) throw NumericError("c51_project: non-finite target");
  const double t = std::clamp(target, support.v_min, support.v_max);

  CategoricalValueDistribution dist;
  dist.support = support;
  dist.probs.assign(support.atoms, 0.0);

  const double x = (t - support.v_min) / support.delta();
  int lo = std::clamp(static_cast<int>(std::floor(x)), 0, support.atoms - 1);
  // Exact atom hits become exact one-hots regardless of rounding in x.
  if (t == support.atom(lo)) {
    dist.probs[lo] = 1.0;
    return dist;
  }
  if (lo + 1 < support.atoms && t == support.atom(lo + 1)) {
    dist.probs[lo + 1] = 1.0;
    return dist;
  }
  if (lo >= support.atoms - 1) {
    dist.probs[support.atoms - 1] = 1.0;
    return dist;
  }
  // Interpolate against the actual atom values so the expectation of the
  // projection equals the clipped target.
  const double a = support.atom(lo);
  const double b = support.atom(lo + 1);
  const double hi_mass = (t - a) / (b - a);
  dist.probs[lo] = 1.0 - hi_mass;
  dist.probs[lo + 1] = hi_mass;
  return dist;
}

double quantile(const CategoricalValueDistribution& dist, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw ContractError("quantile: tau must lie in (0, 1)");
  double cdf = 0.0;
  const int k = dist.support.atoms;
  for (int j = 0; j < k; ++j) {
    cdf += dist.probs[j];
    if (cdf >= tau) return dist.support.atom(j);
  }
  // Mass sums to 1 within tolerance; rounding can leave cdf fractionally
  // short of tau at the top atom.
  return dist.support.atom(k - 1);
}

double normalized_entropy(const CategoricalValueDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probs)
    if (p > 0.0) h -= p * std::log(p);
  return h / std::log(static_cast<double>(dist.support.atoms));
}

void TauSchedule::validate() const {
  if (!(tau_min > 0.0 && tau_min <= tau_base && tau_base <= tau_max &&
        tau_max < 1.0))
    throw ContractError("TauSchedule: need 0 < tau_min <= tau_base <= tau_max < 1");
  if (alpha < 0.0) throw ContractError("TauSchedule: alpha must be >= 0");
}

double adaptive_tau(const CategoricalValueDistribution& dist,
                    const TauSchedule& sched) {
  sched.validate();
  const double h = normalized_entropy(dist);
  return std::clamp(sched.tau_base - sched.alpha * h, sched.tau_min,
                    sched.tau_max);
}

}  // namespace fleetflow::value
