#include "fleetflow/transition.hpp"

#include <cmath>

#include "fleetflow/errors.hpp"

namespace fleetflow::replay {

const char* to_string(Source s) {
  switch (s) {
    case Source::demo: return "demo";
    case Source::rollout_success: return "rollout_success";
    case Source::rollout_fail: return "rollout_fail";
    case Source::play: return "play";
    case Source::online_policy: return "online_policy";
    case Source::online_intervention: return "online_intervention";
  }
  return "?";
}

namespace {
Source classify(const env::Episode& ep, int chunk_index) {
  switch (ep.source) {
    case env::EpisodeSource::demo:
      return Source::demo;
    case env::EpisodeSource::rollout:
      return ep.success ? Source::rollout_success : Source::rollout_fail;
    case env::EpisodeSource::play:
      return Source::play;
    case env::EpisodeSource::online:
      return (chunk_index < static_cast<int>(ep.intervention_mask.size()) &&
              ep.intervention_mask[chunk_index])
                 ? Source::online_intervention
                 : Source::online_policy;
  }
  throw ContractError("classify: unknown episode source");
}
}  // namespace

std::vector<ChunkedTransition> episode_to_transitions(const env::Episode& ep,
                                                      int horizon,
                                                      double gamma) {
  if (ep.steps.empty())
    throw ContractError("episode_to_transitions: empty episode");
  if (horizon < 1)
    throw ContractError("episode_to_transitions: horizon must be >= 1");

  const int total = static_cast<int>(ep.steps.size());
  const int num_chunks = (total + horizon - 1) / horizon;
  std::vector<ChunkedTransition> out;
  out.reserve(num_chunks);

  for (int c = 0; c < num_chunks; ++c) {
    const int start = c * horizon;
    const int executed = std::min(horizon, total - start);

    ChunkedTransition tr;
    tr.obs = ep.steps[start].obs;
    tr.chunk = env::ActionChunk::zeros(horizon);
    double reward = 0.0;
    for (int i = 0; i < executed; ++i) {
      const auto& step = ep.steps[start + i];
      tr.chunk.at(i, 0) = step.action[0];
      tr.chunk.at(i, 1) = step.action[1];
      reward += std::pow(gamma, i) * step.reward;
    }
    // Tail padding repeats the last executed action; padded steps carry zero
    // reward by construction.
    for (int i = executed; i < horizon; ++i) {
      tr.chunk.at(i, 0) = tr.chunk.at(executed - 1, 0);
      tr.chunk.at(i, 1) = tr.chunk.at(executed - 1, 1);
    }
    tr.chunk_reward = reward;
    const bool last = (c == num_chunks - 1);
    tr.next_obs = last ? ep.final_obs : ep.steps[start + horizon].obs;
    tr.terminal = last;
    tr.source = classify(ep, c);
    tr.episode_id = ep.episode_id;
    tr.chunk_index = c;
    tr.task_id = ep.task_id;
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace fleetflow::replay
