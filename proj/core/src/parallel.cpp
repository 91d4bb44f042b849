#include "fleetflow/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fleetflow {

int resolve_thread_count(int configured) {
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_slots(std::size_t n, int threads,
                    const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  struct Slice {
    int slot;
    std::size_t begin, end;
  };
  std::vector<Slice> slices;
  const std::size_t per = (n + kParallelSlots - 1) / kParallelSlots;
  for (int s = 0; s < kParallelSlots; ++s) {
    const std::size_t b = static_cast<std::size_t>(s) * per;
    if (b >= n) break;
    slices.push_back({s, b, std::min(n, b + per)});
  }
  threads = resolve_thread_count(threads);
  if (threads <= 1 || slices.size() == 1) {
    for (const auto& sl : slices) fn(sl.slot, sl.begin, sl.end);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= slices.size()) return;
      try {
        fn(slices[i].slot, slices[i].begin, slices[i].end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(threads, static_cast<int>(slices.size()));
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fleetflow
