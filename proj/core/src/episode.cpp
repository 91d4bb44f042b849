#include "fleetflow/episode.hpp"

#include <fstream>

#include <json.hpp>

#include "fleetflow/errors.hpp"

namespace fleetflow::env {

using nlohmann::json;

const char* to_string(EpisodeSource s) {
  switch (s) {
    case EpisodeSource::demo: return "demo";
    case EpisodeSource::rollout: return "rollout";
    case EpisodeSource::play: return "play";
    case EpisodeSource::online: return "online";
  }
  return "?";
}

EpisodeSource episode_source_from_string(const std::string& s) {
  if (s == "demo") return EpisodeSource::demo;
  if (s == "rollout") return EpisodeSource::rollout;
  if (s == "play") return EpisodeSource::play;
  if (s == "online") return EpisodeSource::online;
  throw ContractError("unknown episode source: " + s);
}

std::string episode_to_json_line(const Episode& ep) {
  json steps = json::array();
  for (const auto& st : ep.steps)
    steps.push_back({{"obs", st.obs},
                     {"action", std::vector<double>{st.action[0], st.action[1]}},
                     {"reward", st.reward}});
  json j{{"episode_id", ep.episode_id},
         {"task_id", ep.task_id},
         {"seed", ep.seed},
         {"policy_version", ep.policy_version},
         {"steps", std::move(steps)},
         {"final_obs", ep.final_obs},
         {"success", ep.success},
         {"source", to_string(ep.source)},
         {"intervention_mask", ep.intervention_mask}};
  return j.dump();
}

Episode episode_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ContractError(std::string("malformed episode record: ") + e.what());
  }
  Episode ep;
  ep.episode_id = j.at("episode_id").get<std::string>();
  ep.task_id = j.at("task_id").get<int>();
  ep.seed = j.at("seed").get<std::uint64_t>();
  ep.policy_version = j.at("policy_version").get<int>();
  for (const auto& st : j.at("steps")) {
    StepRecord rec;
    rec.obs = st.at("obs").get<std::vector<double>>();
    auto a = st.at("action").get<std::vector<double>>();
    if (a.size() != kActionDim)
      throw ContractError("episode record: bad action dimension");
    rec.action = {a[0], a[1]};
    rec.reward = st.at("reward").get<double>();
    ep.steps.push_back(std::move(rec));
  }
  ep.final_obs = j.at("final_obs").get<std::vector<double>>();
  ep.success = j.at("success").get<bool>();
  ep.source = episode_source_from_string(j.at("source").get<std::string>());
  ep.intervention_mask = j.at("intervention_mask").get<std::vector<bool>>();
  return ep;
}

void write_episode_log(const std::string& path,
                       const std::vector<Episode>& episodes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot open episode log for write: " + path);
  for (const auto& ep : episodes) out << episode_to_json_line(ep) << '\n';
}

std::vector<Episode> read_episode_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open episode log: " + path);
  std::vector<Episode> eps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    eps.push_back(episode_from_json_line(line));
  }
  return eps;
}

}  // namespace fleetflow::env
