#include "fleetflow/sampler.hpp"

#include "fleetflow/errors.hpp"

namespace fleetflow::replay {

std::vector<SampledRef> sample_mixed(const Buffer& offline, const Buffer& online,
                                     int batch, Rng& rng) {
  if (batch <= 0 || batch % 2 != 0)
    throw ContractError("sample_mixed: batch must be positive and even");
  if (offline.empty() && online.empty())
    throw ContractError("sample_mixed: both buffers empty");

  std::vector<SampledRef> out;
  out.reserve(batch);
  const int half = batch / 2;
  if (online.empty()) {
    for (int i = 0; i < batch; ++i)
      out.push_back({&offline, rng.uniform_index(offline.size())});
  } else if (offline.empty()) {
    for (int i = 0; i < batch; ++i)
      out.push_back({&online, rng.uniform_index(online.size())});
  } else {
    for (int i = 0; i < half; ++i)
      out.push_back({&offline, rng.uniform_index(offline.size())});
    for (int i = 0; i < half; ++i)
      out.push_back({&online, rng.uniform_index(online.size())});
  }
  // Fisher-Yates so buffer origin is not positional.
  for (std::size_t i = out.size(); i > 1; --i)
    std::swap(out[i - 1], out[rng.uniform_index(i)]);
  return out;
}

}  // namespace fleetflow::replay
