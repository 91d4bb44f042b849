#pragma once

#include "fleetflow/buffer.hpp"
#include "fleetflow/rng.hpp"

namespace fleetflow::replay {

// Indices into (buffer, transition) pairs so callers can assemble n-step
// windows against the owning buffer.
struct SampledRef {
  const Buffer* buffer = nullptr;
  std::size_t index = 0;

  const ChunkedTransition& get() const { return buffer->at(index); }
};

// Per-batch exact 1:1 mix: batch/2 uniform draws from each buffer, shuffled.
// Online-empty degrades to all-offline draws; an online buffer smaller than
// batch/2 is sampled with replacement either way (draws are independent).
std::vector<SampledRef> sample_mixed(const Buffer& offline, const Buffer& online,
                                     int batch, Rng& rng);

}  // namespace fleetflow::replay
