#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fleetflow/task.hpp"

namespace fleetflow::env {

enum class EpisodeSource { demo, rollout, play, online };

const char* to_string(EpisodeSource s);
EpisodeSource episode_source_from_string(const std::string& s);

struct StepRecord {
  std::vector<double> obs;  // observation before the action
  std::array<double, kActionDim> action{};
  double reward = 0.0;
};

// Unit of fleet ingestion: one rollout of one task under one policy version.
struct Episode {
  std::string episode_id;
  int task_id = 0;
  std::uint64_t seed = 0;
  int policy_version = 0;
  std::vector<StepRecord> steps;
  std::vector<double> final_obs;  // observation at termination
  bool success = false;
  EpisodeSource source = EpisodeSource::demo;
  std::vector<bool> intervention_mask;  // one flag per chunk

  double duration_seconds() const { return steps.size() * kDt; }
};

std::string episode_to_json_line(const Episode& ep);
Episode episode_from_json_line(const std::string& line);

// Line-delimited JSON log, one episode per record.
void write_episode_log(const std::string& path,
                       const std::vector<Episode>& episodes);
std::vector<Episode> read_episode_log(const std::string& path);

}  // namespace fleetflow::env
