#include "fleetflow/waypoint_env.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::env {

namespace {
double dist(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}
}  // namespace

EnvState reset(const TaskSpec& spec, Rng& rng) {
  spec.validate();
  EnvState s;
  const double r = kStartRadius * std::sqrt(rng.uniform());
  const double theta = 2.0 * M_PI * rng.uniform();
  s.position = {r * std::cos(theta), r * std::sin(theta)};
  return s;
}

ChunkOutcome step_chunk(const EnvState& state, const TaskSpec& spec,
                        const ActionChunk& chunk) {
  if (state.done) throw ContractError("step_chunk: episode already finished");
  const int m = spec.num_waypoints();

  ChunkOutcome out;
  out.next = state;
  out.rewards.reserve(chunk.horizon);
  for (int h = 0; h < chunk.horizon; ++h) {
    const double vx = std::clamp(chunk.at(h, 0), -kMaxSpeed, kMaxSpeed);
    const double vy = std::clamp(chunk.at(h, 1), -kMaxSpeed, kMaxSpeed);
    out.next.position[0] += vx * kDt;
    out.next.position[1] += vy * kDt;
    out.next.step_count += 1;

    double reward = 0.0;
    while (out.next.progress < m &&
           dist(out.next.position, spec.waypoints[out.next.progress]) <=
               spec.success_radius) {
      out.next.progress += 1;
      if (out.next.progress == m) {
        reward = 1.0;
        out.next.succeeded = true;
        out.next.done = true;
      }
    }
    if (!out.next.done && out.next.step_count >= spec.step_limit)
      out.next.done = true;
    out.rewards.push_back(reward);
    if (out.next.done) break;
  }
  out.done = out.next.done;
  out.succeeded = out.next.succeeded;
  return out;
}

}  // namespace fleetflow::env
