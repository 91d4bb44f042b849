#include "fleetflow/datagen.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::env {

Episode run_episode(const TaskSpec& spec, const ChunkPolicyFn& policy,
                    std::uint64_t seed, const RolloutOptions& opts,
                    std::string episode_id) {
  Rng rng(seed);
  Rng env_rng = rng.fork(1);
  Rng policy_rng = rng.fork(2);
  Rng oracle_rng = rng.fork(3);

  Episode ep;
  ep.episode_id = std::move(episode_id);
  ep.task_id = spec.task_id;
  ep.seed = seed;
  ep.policy_version = opts.policy_version;
  ep.source = opts.source;

  InterventionOracle oracle(opts.intervention_window,
                            opts.intervention_expert_noise);
  EnvState s = reset(spec, env_rng);
  while (!s.done) {
    oracle.observe_chunk_start(s, spec);
    auto corrective =
        oracle.maybe_intervene(s, spec, opts.horizon, oracle_rng);
    const bool intervened = corrective.has_value();
    ActionChunk chunk =
        intervened ? std::move(*corrective) : policy(s, spec, policy_rng);
    ChunkOutcome out = step_chunk(s, spec, chunk);

    EnvState track = s;
    for (std::size_t h = 0; h < out.rewards.size(); ++h) {
      StepRecord rec;
      rec.obs = make_observation(track, spec, opts.num_tasks);
      rec.action = {std::clamp(chunk.at(static_cast<int>(h), 0), -kMaxSpeed, kMaxSpeed),
                    std::clamp(chunk.at(static_cast<int>(h), 1), -kMaxSpeed, kMaxSpeed)};
      rec.reward = out.rewards[h];
      // Advance the tracked state one low-level step to produce the next
      // observation; mirrors step_chunk's integration exactly.
      ActionChunk one = ActionChunk::zeros(1);
      one.at(0, 0) = rec.action[0];
      one.at(0, 1) = rec.action[1];
      track = step_chunk(track, spec, one).next;
      ep.steps.push_back(std::move(rec));
    }
    (void)obs_before;
    ep.intervention_mask.push_back(intervened);
    s = out.next;
  }
  ep.final_obs = make_observation(s, spec, opts.num_tasks);
  ep.success = s.succeeded;
  return ep;
}

namespace {

Episode generate_one(const TaskSpec& spec, EpisodeSource source, double noise,
                     int horizon, int num_tasks, std::uint64_t seed,
                     std::string id) {
  RolloutOptions opts;
  opts.horizon = horizon;
  opts.num_tasks = num_tasks;
  opts.source = source;
  ChunkPolicyFn policy;
  if (source == EpisodeSource::play) {
    policy = [horizon](const EnvState& s, const TaskSpec& sp, Rng& r) {
      return play_script(s, sp, horizon, r);
    };
  } else {
    policy = [noise, horizon](const EnvState& s, const TaskSpec& sp, Rng& r) {
      return scripted_expert(s, sp, horizon, noise, r);
    };
  }
  return run_episode(spec, policy, seed, opts, std::move(id));
}

}  // namespace

std::vector<Episode> generate_offline_buffer(const std::vector<TaskSpec>& tasks,
                                             const DataGenConfig& cfg,
                                             std::uint64_t seed) {
  if (cfg.per_task.size() != tasks.size())
    throw ConfigError("generate_offline_buffer: counts per task mismatch");
  const int num_tasks = static_cast<int>(tasks.size());
  std::vector<Episode> out;
  Rng root(seed);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const TaskSpec& spec = tasks[t];
    const SourceCounts& counts = cfg.per_task[t];
    if (counts.demo < 0 || counts.rollout < 0 || counts.play < 0)
      throw ConfigError("generate_offline_buffer: negative episode count");
    Rng task_rng = root.fork(1000 + t);

    // Demos: keep successes only, redrawing seeds until the quota is met.
    int kept = 0;
    long attempts = 0;
    const long max_attempts = 200L * std::max(1, counts.demo);
    while (kept < counts.demo) {
      if (++attempts > max_attempts)
        throw ConfigError("demo generation: success quota unreachable; "
                          "lower demo_noise");
      Episode ep = generate_one(
          spec, EpisodeSource::demo, cfg.demo_noise, cfg.horizon, num_tasks,
          task_rng.next_u64(),
          "off-t" + std::to_string(spec.task_id) + "-demo-" + std::to_string(kept));
      if (!ep.success) continue;
      out.push_back(std::move(ep));
      ++kept;
    }

    for (int i = 0; i < counts.rollout; ++i)
      out.push_back(generate_one(
          spec, EpisodeSource::rollout, cfg.rollout_noise, cfg.horizon,
          num_tasks, task_rng.next_u64(),
          "off-t" + std::to_string(spec.task_id) + "-rollout-" + std::to_string(i)));

    for (int i = 0; i < counts.play; ++i) {
      Episode ep;
      do {
        ep = generate_one(
            spec, EpisodeSource::play, 0.0, cfg.horizon, num_tasks,
            task_rng.next_u64(),
            "off-t" + std::to_string(spec.task_id) + "-play-" + std::to_string(i));
      } while (ep.success);  // guard band makes this a non-event
      out.push_back(std::move(ep));
    }
  }
  return out;
}

BufferSummary summarize(const std::vector<Episode>& episodes) {
  BufferSummary s;
  for (const auto& ep : episodes) {
    SourceSummary* bucket = nullptr;
    switch (ep.source) {
      case EpisodeSource::demo: bucket = &s.demo; break;
      case EpisodeSource::rollout:
        bucket = ep.success ? &s.rollout_success : &s.rollout_fail;
        break;
      case EpisodeSource::play: bucket = &s.play; break;
      case EpisodeSource::online: bucket = nullptr; break;
    }
    if (!bucket) continue;
    bucket->episodes += 1;
    bucket->steps += static_cast<long>(ep.steps.size());
  }
  return s;
}

}  // namespace fleetflow::env
