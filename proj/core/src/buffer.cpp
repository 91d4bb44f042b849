#include "fleetflow/buffer.hpp"

#include <cstring>
#include <fstream>

#include "fleetflow/errors.hpp"

namespace fleetflow::replay {

void Buffer::append_episode(const env::Episode& ep, int horizon, double gamma) {
  if (by_episode_.count(ep.episode_id))
    throw ContractError("Buffer: duplicate episode id " + ep.episode_id);
  auto chunks = episode_to_transitions(ep, horizon, gamma);
  std::vector<std::size_t>& idx = by_episode_[ep.episode_id];
  idx.reserve(chunks.size());
  for (auto& tr : chunks) {
    idx.push_back(transitions_.size());
    transitions_.push_back(std::move(tr));
  }
  episode_order_.push_back(ep.episode_id);
}

bool Buffer::contains_episode(const std::string& episode_id) const {
  return by_episode_.count(episode_id) > 0;
}

std::size_t Buffer::transition_index(const std::string& episode_id,
                                     int chunk_index) const {
  auto it = by_episode_.find(episode_id);
  if (it == by_episode_.end())
    throw ContractError("Buffer: unknown episode " + episode_id);
  if (chunk_index < 0 || chunk_index >= static_cast<int>(it->second.size()))
    throw ContractError("Buffer: chunk index out of range");
  return it->second[chunk_index];
}

NStepSample Buffer::make_nstep(std::size_t index, int n) const {
  if (index >= transitions_.size())
    throw ContractError("make_nstep: transition not in buffer");
  if (n < 1) throw ContractError("make_nstep: n must be >= 1");

  const ChunkedTransition& base = transitions_[index];
  const auto& episode_chunks = by_episode_.at(base.episode_id);

  NStepSample s;
  s.obs = base.obs;
  s.chunk = base.chunk;
  s.task_id = base.task_id;
  const ChunkedTransition* last = nullptr;
  for (int i = 0; i < n; ++i) {
    const int ci = base.chunk_index + i;
    if (ci >= static_cast<int>(episode_chunks.size())) break;
    last = &transitions_[episode_chunks[ci]];
    s.chunk_rewards.push_back(last->chunk_reward);
    s.effective_n += 1;
    if (last->terminal) break;
  }
  if (last && !last->terminal) s.bootstrap_obs = last->next_obs;
  return s;
}

namespace {
constexpr char kIndexMagic[8] = {'f', 'f', 'e', 'p', 'i', 'd', 'x', '1'};
}

void write_episode_index(const std::string& log_path,
                         const std::string& index_path) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw ContractError("cannot open episode log: " + log_path);
  std::vector<EpisodeIndexRecord> records;
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    const std::uint64_t next = offset + line.size() + 1;
    if (!line.empty()) {
      env::Episode ep = env::episode_from_json_line(line);
      EpisodeIndexRecord r;
      r.byte_offset = offset;
      r.task_id = static_cast<std::uint32_t>(ep.task_id);
      r.step_count = static_cast<std::uint32_t>(ep.steps.size());
      r.success = ep.success ? 1 : 0;
      r.source = static_cast<std::uint8_t>(ep.source);
      records.push_back(r);
    }
    offset = next;
  }
  std::ofstream out(index_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot open index for write: " + index_path);
  out.write(kIndexMagic, sizeof(kIndexMagic));
  const std::uint64_t count = records.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& r : records) {
    char rec[18];
    std::memcpy(rec, &r.byte_offset, 8);
    std::memcpy(rec + 8, &r.task_id, 4);
    std::memcpy(rec + 12, &r.step_count, 4);
    rec[16] = static_cast<char>(r.success);
    rec[17] = static_cast<char>(r.source);
    out.write(rec, sizeof(rec));
  }
}

std::vector<EpisodeIndexRecord> read_episode_index(const std::string& index_path) {
  std::ifstream in(index_path, std::ios::binary);
  if (!in) throw ContractError("cannot open index: " + index_path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0)
    throw ContractError("bad index file magic: " + index_path);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  std::vector<EpisodeIndexRecord> records(count);
  for (auto& r : records) {
    char rec[18];
    in.read(rec, sizeof(rec));
    if (!in) throw ContractError("truncated index file: " + index_path);
    std::memcpy(&r.byte_offset, rec, 8);
    std::memcpy(&r.task_id, rec + 8, 4);
    std::memcpy(&r.step_count, rec + 12, 4);
    r.success = static_cast<std::uint8_t>(rec[16]);
    r.source = static_cast<std::uint8_t>(rec[17]);
  }
  return records;
}

}  // namespace fleetflow::replay
