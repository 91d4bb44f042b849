#pragma once

#include <deque>
#include <optional>

#include "fleetflow/rng.hpp"
#include "fleetflow/task.hpp"

namespace fleetflow::env {

// Chunk pointing toward the next unvisited waypoint at max speed, with
// additive Gaussian noise of the given scale, clipped. Internally simulates
// its own motion across the chunk so later steps track waypoint handoffs.
ActionChunk scripted_expert(const EnvState& state, const TaskSpec& spec,
                            int horizon, double noise_scale, Rng& rng);

// Adversarial script for play data: approaches the next waypoint but veers
// off before entering the success radius, so episodes always time out.
ActionChunk play_script(const EnvState& state, const TaskSpec& spec,
                        int horizon, Rng& rng);

// Stall detector standing in for a human operator. Returns an expert chunk
// when the last `window` chunks made no waypoint progress AND the distance to
// the next waypoint increased over that window; otherwise nullopt.
class InterventionOracle {
 public:
  // window <= 0 disables intervention entirely (pure autonomous mode).
  InterventionOracle(int window, double expert_noise)
      : window_(window), expert_noise_(expert_noise) {}

  void observe_chunk_start(const EnvState& state, const TaskSpec& spec);
  std::optional<ActionChunk> maybe_intervene(const EnvState& state,
                                             const TaskSpec& spec, int horizon,
                                             Rng& rng) const;
  void reset();

 private:
  int window_;
  double expert_noise_;
  struct Snapshot {
    int progress;
    double dist_to_next;
  };
  std::deque<Snapshot> history_;
};

}  // namespace fleetflow::env
