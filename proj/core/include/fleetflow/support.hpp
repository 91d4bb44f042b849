#pragma once

#include <vector>

#include "fleetflow/errors.hpp"

namespace fleetflow::value {

// Fixed categorical support: K atoms uniformly spaced on [v_min, v_max].
struct ValueSupport {
  int atoms = 201;
  double v_min = -0.1;
  double v_max = 1.1;

  double delta() const { return (v_max - v_min) / (atoms - 1); }
  double atom(int i) const {
    return v_min + (v_max - v_min) * static_cast<double>(i) / (atoms - 1);
  }
  void validate() const {
    if (atoms < 2) throw ContractError("ValueSupport: need at least 2 atoms");
    if (!(v_min < v_max)) throw ContractError("ValueSupport: v_min must be < v_max");
  }
  bool operator==(const ValueSupport& o) const {
    return atoms == o.atoms && v_min == o.v_min && v_max == o.v_max;
  }
};

struct CategoricalValueDistribution {
  std::vector<double> probs;
  ValueSupport support;

  void validate() const;
};

// Clips the target into the support and splits its mass between the two
// bracketing atoms proportionally to proximity; exact one-hot when the target
// hits an atom. Preserves the clipped target's expectation.
CategoricalValueDistribution c51_project(double target,
                                         const ValueSupport& support);

// Smallest atom whose CDF reaches tau (discrete generalized inverse). tau
// must lie in (0, 1).
double quantile(const CategoricalValueDistribution& dist, double tau);

// Entropy normalized by log K, with 0 log 0 := 0. One-hot -> 0, uniform -> 1.
double normalized_entropy(const CategoricalValueDistribution& dist);

// Entropy-conditioned bootstrap quantile level.
struct TauSchedule {
  double tau_base = 0.6;
  double alpha = 0.3;
  double tau_min = 0.3;
  double tau_max = 0.95;

  void validate() const;
};

// clip(tau_base - alpha * H_norm, tau_min, tau_max); treated as a constant in
// target construction (no gradient path).
double adaptive_tau(const CategoricalValueDistribution& dist,
                    const TauSchedule& sched);

}  // namespace fleetflow::value
