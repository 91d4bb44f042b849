#include "fleetflow/flow_sampler.hpp"

#include <cmath>
#include <string>

namespace fleetflow::flow {

std::vector<double> sample_noise_chunk(int chunk_dim, Rng& rng) {
  std::vector<double> noise(chunk_dim);
  for (double& v : noise) v = rng.normal();
  return noise;
}

FlowTrajectory rollout_from_noise(const FlowField& field,
                                  std::span<const double> obs,
                                  std::vector<double> noise, int n_flow,
                                  FlowField::Workspace& ws) {
  if (n_flow < 1) throw ContractError("rollout_from_noise: n_flow must be >= 1");
  if (noise.size() != static_cast<std::size_t>(field.chunk_dim()))
    throw ContractError("rollout_from_noise: noise dimension mismatch");

  FlowTrajectory traj;
  traj.times.resize(n_flow + 1);
  traj.states.resize(n_flow + 1);
  traj.velocities.resize(n_flow + 1);
  const double dw = 1.0 / n_flow;
  traj.states[0] = std::move(noise);
  for (int j = 0; j <= n_flow; ++j) {
    traj.times[j] = static_cast<double>(j) * dw;
    field.velocity(obs, traj.states[j], traj.times[j], traj.velocities[j], ws);
    for (double v : traj.states[j])
      if (!std::isfinite(v))
        throw NumericError("flow rollout: non-finite state at step " +
                           std::to_string(j));
    if (j < n_flow) {
      auto& next = traj.states[j + 1];
      next = traj.states[j];
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] += dw * traj.velocities[j][i];
    }
  }
  return traj;
}

SampleResult sample_action(const FlowField& field, std::span<const double> obs,
                           int n_flow, Rng& rng, FlowField::Workspace& ws) {
  SampleResult out;
  out.trajectory = rollout_from_noise(
      field, obs, sample_noise_chunk(field.chunk_dim(), rng), n_flow, ws);
  out.action = env::ActionChunk::from_flat(field.horizon(),
                                           out.trajectory.endpoint());
  return out;
}

}  // namespace fleetflow::flow
