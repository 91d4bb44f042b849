#pragma once

#include "fleetflow/flow_sampler.hpp"

namespace fleetflow::flow {

// Backward-transported sensitivity along a reference-flow trajectory.
// adjoints[j] pairs with trajectory node j; the terminal node holds
// -terminal_grad / lambda exactly.
struct AdjointPath {
  std::vector<std::vector<double>> adjoints;
};

// Lean adjoint recursion driven by the reference field's state Jacobian,
// realized as one vector-Jacobian product per grid node (the Jacobian itself
// is never materialized):
//   g[N]   = -terminal_grad / lambda
//   g[j-1] = g[j] + dw * (df/da at node j)^T g[j]
AdjointPath solve_adjoint(const FlowField& reference, std::span<const double> obs,
                          const FlowTrajectory& traj,
                          std::span<const double> terminal_grad, double lambda,
                          FlowField::Workspace& ws);

}  // namespace fleetflow::flow
