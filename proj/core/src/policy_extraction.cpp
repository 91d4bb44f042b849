#include "fleetflow/policy_extraction.hpp"

#include <cmath>

#include "fleetflow/parallel.hpp"

namespace fleetflow::flow {

double adjoint_matching_loss_accum(const FlowField& policy,
                                   const FlowField& reference,
                                   std::span<const double> obs,
                                   const FlowTrajectory& traj,
                                   const AdjointPath& adj,
                                   nn::ParamVector* grad_accum,
                                   FlowField::Workspace& policy_ws,
                                   FlowField::Workspace& reference_ws) {
  const int d = policy.chunk_dim();
  if (reference.chunk_dim() != d)
    throw ContractError("adjoint_matching_loss: field dimensions differ");
  if (static_cast<int>(adj.adjoints.size()) != traj.nodes())
    throw ContractError("adjoint_matching_loss: trajectory/adjoint mismatch");

  const int cells = traj.cells();
  const double dw = 1.0 / cells;
  std::vector<double> mid_state(d), mid_adj(d), f_policy, f_reference;
  std::vector<double> resid(d), upstream(d);
  double loss = 0.0;
  for (int j = 0; j < cells; ++j) {
    const double w_mid = 0.5 * (traj.times[j] + traj.times[j + 1]);
    const double sigma = std::sqrt(2.0 * (1.0 - w_mid) * w_mid);
    for (int i = 0; i < d; ++i) {
      mid_state[i] = 0.5 * (traj.states[j][i] + traj.states[j + 1][i]);
      mid_adj[i] = 0.5 * (adj.adjoints[j][i] + adj.adjoints[j + 1][i]);
    }
    policy.velocity(obs, mid_state, w_mid, f_policy, policy_ws);
    reference.velocity(obs, mid_state, w_mid, f_reference, reference_ws);
    double cell_loss = 0.0;
    for (int i = 0; i < d; ++i) {
      resid[i] = 2.0 * (f_policy[i] - f_reference[i]) / sigma + sigma * mid_adj[i];
      cell_loss += resid[i] * resid[i];
      upstream[i] = dw * 4.0 / sigma * resid[i];
    }
    loss += dw * cell_loss;
    if (grad_accum)
      policy.backward_accum(obs, mid_state, w_mid, upstream, grad_accum,
                            nullptr, policy_ws);
  }
  return loss;
}

PolicyGradient policy_extraction_gradient(const FlowField& policy,
                                          const FlowField& reference,
                                          const value::Critic& critic,
                                          const PolicyBatch& batch,
                                          double lambda, int n_flow,
                                          std::uint64_t seed, int threads) {
  const std::size_t n = batch.observations.size();
  if (n == 0) throw ContractError("policy_extraction_gradient: empty batch");
  if (batch.anchored && batch.anchors.size() != n)
    throw ContractError("policy_extraction_gradient: anchors/observations mismatch");

  auto layout = policy.net().params().layout;
  std::vector<nn::ParamVector> slot_grads(kParallelSlots,
                                          nn::ParamVector::zeros(layout));
  std::vector<double> slot_loss(kParallelSlots, 0.0);

  parallel_slots(n, threads, [&](int slot, std::size_t begin, std::size_t end) {
    FlowField::Workspace policy_ws, reference_ws;
    value::Critic::Workspace critic_ws;
    std::vector<double> terminal_grad;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(mix_seed(seed, i));
      const auto& obs = batch.observations[i];
      FlowTrajectory traj = rollout_from_noise(
          reference, obs, sample_noise_chunk(reference.chunk_dim(), rng),
          n_flow, reference_ws);
      const std::vector<double>& endpoint =
          batch.anchored ? batch.anchors[i] : traj.endpoint();
      critic.action_grad_min(obs, endpoint, terminal_grad, critic_ws);
      AdjointPath adj = solve_adjoint(reference, obs, traj, terminal_grad,
                                      lambda, reference_ws);
      slot_loss[slot] += adjoint_matching_loss_accum(
          policy, reference, obs, traj, adj, &slot_grads[slot], policy_ws,
          reference_ws);
    }
  });

  PolicyGradient out;
  out.grads = nn::ParamVector::zeros(layout);
  for (int s = 0; s < kParallelSlots; ++s) {
    out.loss += slot_loss[s];
    for (std::size_t i = 0; i < out.grads.values.size(); ++i)
      out.grads.values[i] += slot_grads[s].values[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.loss *= inv;
  double norm_sq = 0.0;
  for (double& g : out.grads.values) {
    g *= inv;
    norm_sq += g * g;
  }
  out.grad_norm = std::sqrt(norm_sq);
  return out;
}

PolicyUpdateMetrics policy_update(FlowField& policy, const FlowField& reference,
                                  const value::Critic& critic,
                                  const PolicyBatch& batch, double lambda,
                                  int n_flow, nn::AdamState& opt, double lr,
                                  std::uint64_t seed, int threads) {
  PolicyGradient g = policy_extraction_gradient(policy, reference, critic,
                                                batch, lambda, n_flow, seed,
                                                threads);
  const std::vector<double> before = policy.net().params().values;
  nn::opt_step(policy.net().params(), g.grads, opt, lr);

  PolicyUpdateMetrics m;
  m.loss = g.loss;
  m.grad_norm = g.grad_norm;
  double norm_sq = 0.0;
  const auto& after = policy.net().params().values;
  for (std::size_t i = 0; i < after.size(); ++i) {
    const double d = after[i] - before[i];
    norm_sq += d * d;
  }
  m.update_norm = std::sqrt(norm_sq);
  return m;
}

}  // namespace fleetflow::flow
