#pragma once

#include <functional>

#include "fleetflow/episode.hpp"
#include "fleetflow/expert.hpp"
#include "fleetflow/waypoint_env.hpp"

namespace fleetflow::env {

// Produces the chunk to execute from the current state. The Rng is the
// episode's policy stream.
using ChunkPolicyFn =
    std::function<ActionChunk(const EnvState&, const TaskSpec&, Rng&)>;

struct RolloutOptions {
  int horizon = 30;
  int num_tasks = 2;
  EpisodeSource source = EpisodeSource::rollout;
  int policy_version = 0;
  // Intervention window in chunks; <= 0 disables the oracle.
  int intervention_window = 0;
  double intervention_expert_noise = 0.0;
};

// Runs one full episode. (seed, policy) fully determines the outcome.
Episode run_episode(const TaskSpec& spec, const ChunkPolicyFn& policy,
                    std::uint64_t seed, const RolloutOptions& opts,
                    std::string episode_id);

struct SourceCounts {
  int demo = 0;
  int rollout = 0;
  int play = 0;
};

struct DataGenConfig {
  std::vector<SourceCounts> per_task;  // aligned with the task list
  double demo_noise = 0.25;
  double rollout_noise = 0.6;
  int horizon = 30;
};

// Offline buffer composition: demos are success-filtered low-noise expert
// runs, rollouts keep their true success labels, play episodes approach and
// abandon waypoints and are always failures.
std::vector<Episode> generate_offline_buffer(const std::vector<TaskSpec>& tasks,
                                             const DataGenConfig& cfg,
                                             std::uint64_t seed);

struct SourceSummary {
  int episodes = 0;
  long steps = 0;
  double hours() const { return steps * kDt / 3600.0; }
};

struct BufferSummary {
  SourceSummary demo, rollout_success, rollout_fail, play;
  double total_hours() const {
    return demo.hours() + rollout_success.hours() + rollout_fail.hours() +
           play.hours();
  }
};

BufferSummary summarize(const std::vector<Episode>& episodes);

}  // namespace fleetflow::env
