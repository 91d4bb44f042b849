#include "fleetflow/expert.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::env {

namespace {
double dist(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}
}  // namespace

ActionChunk scripted_expert(const EnvState& state, const TaskSpec& spec,
                            int horizon, double noise_scale, Rng& rng) {
  const int m = spec.num_waypoints();
  ActionChunk chunk = ActionChunk::zeros(horizon);
  Point pos = state.position;
  int progress = state.progress;
  for (int h = 0; h < horizon; ++h) {
    double vx = 0.0, vy = 0.0;
    if (progress < m) {
      const Point& wp = spec.waypoints[progress];
      const double d = dist(pos, wp);
      if (d > 1e-12) {
        vx = kMaxSpeed * (wp[0] - pos[0]) / d;
        vy = kMaxSpeed * (wp[1] - pos[1]) / d;
      }
    }
    if (noise_scale > 0.0) {
      vx += noise_scale * rng.normal();
      vy += noise_scale * rng.normal();
    }
    vx = std::clamp(vx, -kMaxSpeed, kMaxSpeed);
    vy = std::clamp(vy, -kMaxSpeed, kMaxSpeed);
    chunk.at(h, 0) = vx;
    chunk.at(h, 1) = vy;
    pos[0] += vx * kDt;
    pos[1] += vy * kDt;
    while (progress < m &&
           dist(pos, spec.waypoints[progress]) <= spec.success_radius)
      progress += 1;
  }
  return chunk;
}

ActionChunk play_script(const EnvState& state, const TaskSpec& spec,
                        int horizon, Rng& rng) {
  // Keep a guard band of two success radii so the waypoint is approached but
  // never consumed.
  const double abandon_radius = 2.0 * spec.success_radius;
  const int m = spec.num_waypoints();
  ActionChunk chunk = ActionChunk::zeros(horizon);
  Point pos = state.position;
  const int target = std::min(state.progress, m - 1);
  const Point& wp = spec.waypoints[target];
  // Direction of retreat fixed per chunk for coherent-looking exploration.
  const double retreat_theta = 2.0 * M_PI * rng.uniform();
  for (int h = 0; h < horizon; ++h) {
    const double d = dist(pos, wp);
    double vx, vy;
    if (d > abandon_radius * 1.5) {
      vx = kMaxSpeed * (wp[0] - pos[0]) / d;
      vy = kMaxSpeed * (wp[1] - pos[1]) / d;
    } else {
      vx = kMaxSpeed * std::cos(retreat_theta);
      vy = kMaxSpeed * std::sin(retreat_theta);
    }
    vx = std::clamp(vx + 0.1 * rng.normal(), -kMaxSpeed, kMaxSpeed);
    vy = std::clamp(vy + 0.1 * rng.normal(), -kMaxSpeed, kMaxSpeed);
    // Reject steps that would cross into the success radius.
    const double nx = pos[0] + vx * kDt;
    const double ny = pos[1] + vy * kDt;
    if (dist({nx, ny}, wp) <= abandon_radius) {
      vx = kMaxSpeed * std::cos(retreat_theta);
      vy = kMaxSpeed * std::sin(retreat_theta);
    }
    chunk.at(h, 0) = vx;
    chunk.at(h, 1) = vy;
    pos[0] += vx * kDt;
    pos[1] += vy * kDt;
  }
  return chunk;
}

void InterventionOracle::observe_chunk_start(const EnvState& state,
                                             const TaskSpec& spec) {
  if (window_ <= 0) return;
  const int target = std::min(state.progress, spec.num_waypoints() - 1);
  history_.push_back(
      {state.progress, dist(state.position, spec.waypoints[target])});
  while (static_cast<int>(history_.size()) > window_ + 1) history_.pop_front();
}

std::optional<ActionChunk> InterventionOracle::maybe_intervene(
    const EnvState& state, const TaskSpec& spec, int horizon, Rng& rng) const {
  if (window_ <= 0) return std::nullopt;
  if (static_cast<int>(history_.size()) < window_ + 1) return std::nullopt;
  const Snapshot& oldest = history_.front();
  const Snapshot& latest = history_.back();
  const bool no_progress = latest.progress <= oldest.progress;
  const bool drifting_away = latest.dist_to_next > oldest.dist_to_next;
  if (no_progress && drifting_away)
    return scripted_expert(state, spec, horizon, expert_noise_, rng);
  return std::nullopt;
}

void InterventionOracle::reset() { history_.clear(); }

}  // namespace fleetflow::env
