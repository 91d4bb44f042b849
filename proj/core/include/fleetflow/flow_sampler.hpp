#pragma once

#include "fleetflow/flow_field.hpp"

namespace fleetflow::flow {

// Forward-Euler record of one generation pass: uniform grid w_0 = 0 ... w_N
// = 1, chunk states at every node (states[0] is the Gaussian noise draw) and
// the field velocity evaluated at every node.
struct FlowTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> velocities;

  int nodes() const { return static_cast<int>(times.size()); }
  int cells() const { return nodes() - 1; }
  const std::vector<double>& endpoint() const { return states.back(); }
};

struct SampleResult {
  env::ActionChunk action;  // endpoint clipped to the command range
  FlowTrajectory trajectory;
};

std::vector<double> sample_noise_chunk(int chunk_dim, Rng& rng);

// Integrates da/dw = f(obs, a, w) from noise over n_flow uniform Euler steps.
SampleResult sample_action(const FlowField& field, std::span<const double> obs,
                           int n_flow, Rng& rng, FlowField::Workspace& ws);

// Same integration from a caller-supplied noise chunk (paired-noise use).
FlowTrajectory rollout_from_noise(const FlowField& field,
                                  std::span<const double> obs,
                                  std::vector<double> noise, int n_flow,
                                  FlowField::Workspace& ws);

}  // namespace fleetflow::flow
