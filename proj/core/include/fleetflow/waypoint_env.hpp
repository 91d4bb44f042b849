#pragma once

#include "fleetflow/rng.hpp"
#include "fleetflow/task.hpp"

namespace fleetflow::env {

struct ChunkOutcome {
  EnvState next;
  std::vector<double> rewards;  // one entry per executed low-level step, <= H
  bool done = false;
  bool succeeded = false;
};

// Start position uniform on the disc of radius kStartRadius around the
// origin; counters zeroed.
EnvState reset(const TaskSpec& spec, Rng& rng);

// Integrates the chunk with fixed dt, consuming waypoints within the success
// radius. Sparse reward: 1 exactly at the step where the last waypoint is
// reached, 0 elsewhere. Stops early on success or step limit; rewards only
// cover executed steps. Throws ContractError when called on a finished
// episode.
ChunkOutcome step_chunk(const EnvState& state, const TaskSpec& spec,
                        const ActionChunk& chunk);

}  // namespace fleetflow::env
