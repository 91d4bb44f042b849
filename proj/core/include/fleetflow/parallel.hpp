#pragma once

#include <cstddef>
#include <functional>

namespace fleetflow {

// Fixed number of work slots so per-slot accumulators can be reduced in a
// deterministic order regardless of how many threads actually run.
inline constexpr int kParallelSlots = 16;

// Splits [0, n) into kParallelSlots contiguous slices and runs fn(slot,
// begin, end) for the non-empty ones on up to `threads` workers (threads <= 1
// runs inline). Exceptions from workers are rethrown on the caller.
void parallel_slots(std::size_t n, int threads,
                    const std::function<void(int, std::size_t, std::size_t)>& fn);

int resolve_thread_count(int configured);

}  // namespace fleetflow
