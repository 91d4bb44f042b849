#pragma once

#include <optional>

#include "fleetflow/adam.hpp"
#include "fleetflow/adjoint.hpp"
#include "fleetflow/critic.hpp"

namespace fleetflow::flow {

// Midpoint-rule discretization of the local regression objective along a
// reference trajectory:
//   integral over w of || 2 f_delta / sigma_w + sigma_w g_w ||^2,
//   sigma_w = sqrt(2 (1 - w) w),  f_delta = f_policy - f_reference.
// States and adjoints at cell midpoints are node averages; evaluating at
// midpoints keeps sigma strictly positive. Only the policy field carries
// gradients. Returns the per-trajectory loss.
double adjoint_matching_loss_accum(const FlowField& policy,
                                   const FlowField& reference,
                                   std::span<const double> obs,
                                   const FlowTrajectory& traj,
                                   const AdjointPath& adj,
                                   nn::ParamVector* grad_accum,
                                   FlowField::Workspace& policy_ws,
                                   FlowField::Workspace& reference_ws);

struct PolicyBatch {
  // One observation per sample.
  std::vector<std::vector<double>> observations;
  // When present (replay-anchored mode), the chunk whose critic gradient
  // seeds the terminal adjoint; otherwise the rollout endpoint is used.
  std::vector<std::vector<double>> anchors;
  bool anchored = false;
};

struct PolicyGradient {
  double loss = 0.0;       // batch mean
  nn::ParamVector grads;   // batch mean
  double grad_norm = 0.0;  // L2 of grads
};

// Full extraction gradient for one batch: per sample, rolls out the frozen
// reference from fresh noise, seeds the terminal adjoint with the critic's
// action gradient (min head) scaled by -1/lambda, transports it backward and
// accumulates the matching loss gradient. Deterministic in (seed, batch).
PolicyGradient policy_extraction_gradient(const FlowField& policy,
                                          const FlowField& reference,
                                          const value::Critic& critic,
                                          const PolicyBatch& batch,
                                          double lambda, int n_flow,
                                          std::uint64_t seed, int threads);

struct PolicyUpdateMetrics {
  double loss = 0.0;
  double grad_norm = 0.0;
  double update_norm = 0.0;  // L2 of the applied parameter change
};

// One optimizer step on the extraction objective.
PolicyUpdateMetrics policy_update(FlowField& policy, const FlowField& reference,
                                  const value::Critic& critic,
                                  const PolicyBatch& batch, double lambda,
                                  int n_flow, nn::AdamState& opt, double lr,
                                  std::uint64_t seed, int threads);

}  // namespace fleetflow::flow
