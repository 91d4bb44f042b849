#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fleetflow/episode.hpp"
#include "fleetflow/task.hpp"

namespace fleetflow::replay {

enum class Source {
  demo,
  rollout_success,
  rollout_fail,
  play,
  online_policy,
  online_intervention,
};

const char* to_string(Source s);

// The replay atom: one non-overlapping chunk of an episode.
struct ChunkedTransition {
  std::vector<double> obs;       // s_t
  env::ActionChunk chunk;        // executed commands, padded on the tail chunk
  double chunk_reward = 0.0;     // within-chunk discounted sum
  std::vector<double> next_obs;  // s_{t+H}
  bool terminal = false;
  Source source = Source::demo;
  std::string episode_id;
  int chunk_index = 0;
  int task_id = 0;
};

// Window of up to n consecutive same-episode chunks for multi-step targets.
// bootstrap_obs is absent exactly when the episode terminated inside the
// window; effective_n counts the chunks actually summed.
struct NStepSample {
  std::vector<double> obs;
  env::ActionChunk chunk;
  std::vector<double> chunk_rewards;
  std::optional<std::vector<double>> bootstrap_obs;
  int effective_n = 0;
  int task_id = 0;
};

// Splits an episode into stride-H chunks (Eq.-style within-chunk discounting
// of the sparse rewards). The final partial chunk repeats its last action and
// zero-pads rewards, and is marked terminal.
std::vector<ChunkedTransition> episode_to_transitions(const env::Episode& ep,
                                                      int horizon,
                                                      double gamma);

}  // namespace fleetflow::replay
