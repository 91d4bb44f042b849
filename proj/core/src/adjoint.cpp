#include "fleetflow/adjoint.hpp"

#include <cmath>
#include <string>

namespace fleetflow::flow {

AdjointPath solve_adjoint(const FlowField& reference, std::span<const double> obs,
                          const FlowTrajectory& traj,
                          std::span<const double> terminal_grad, double lambda,
                          FlowField::Workspace& ws) {
  const int d = reference.chunk_dim();
  if (terminal_grad.size() != static_cast<std::size_t>(d))
    throw ContractError("solve_adjoint: terminal gradient dimension mismatch");
  if (traj.nodes() < 2) throw ContractError("solve_adjoint: empty trajectory");
  if (lambda <= 0.0) throw ContractError("solve_adjoint: lambda must be positive");

  const int n = traj.cells();
  const double dw = 1.0 / n;
  AdjointPath path;
  path.adjoints.resize(n + 1);
  auto& g = path.adjoints;
  g[n].resize(d);
  for (int i = 0; i < d; ++i) g[n][i] = -terminal_grad[i] / lambda;

  std::vector<double> vjp(d);
  for (int j = n; j >= 1; --j) {
    reference.backward_accum(obs, traj.states[j], traj.times[j], g[j], nullptr,
                             vjp.data(), ws);
    g[j - 1].resize(d);
    for (int i = 0; i < d; ++i) {
      g[j - 1][i] = g[j][i] + dw * vjp[i];
      if (!std::isfinite(g[j - 1][i]))
        throw NumericError("solve_adjoint: non-finite adjoint at node " +
                           std::to_string(j - 1));
    }
  }
  return path;
}

}  // namespace fleetflow::flow
