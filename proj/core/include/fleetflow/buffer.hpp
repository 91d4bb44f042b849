#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "fleetflow/transition.hpp"

namespace fleetflow::replay {

enum class BufferKind { offline, online };

// Append-only chunk-level transition store with a per-episode index.
// Sampling never mutates contents.
class Buffer {
 public:
  explicit Buffer(BufferKind kind) : kind_(kind) {}

  BufferKind kind() const { return kind_; }
  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  const ChunkedTransition& at(std::size_t i) const { return transitions_[i]; }

  // Appends all chunks of an episode. Duplicate episode ids are rejected.
  void append_episode(const env::Episode& ep, int horizon, double gamma);
  bool contains_episode(const std::string& episode_id) const;

  // Index of the chunk `chunk_index` within the given episode.
  std::size_t transition_index(const std::string& episode_id,
                               int chunk_index) const;

  // Consecutive same-episode window starting at transition `index`: gathers
  // up to n chunk rewards, stopping at the terminal chunk. Bootstrap state is
  // s_{t + effective_n * H} and is present iff no terminal was hit.
  NStepSample make_nstep(std::size_t index, int n) const;

  const std::vector<std::string>& episode_ids() const { return episode_order_; }

 private:
  BufferKind kind_;
  std::vector<ChunkedTransition> transitions_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_episode_;
  std::vector<std::string> episode_order_;
};

// Binary fixed-width index of byte offsets into an episode log, one record
// per episode; regenerable from the log at any time.
struct EpisodeIndexRecord {
  std::uint64_t byte_offset = 0;
  std::uint32_t task_id = 0;
  std::uint32_t step_count = 0;
  std::uint8_t success = 0;
  std::uint8_t source = 0;
};

void write_episode_index(const std::string& log_path,
                         const std::string& index_path);
std::vector<EpisodeIndexRecord> read_episode_index(const std::string& index_path);

}  // namespace fleetflow::replay
