#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fleetflow/errors.hpp"

namespace fleetflow::env {

using Point = std::array<double, 2>;

inline constexpr int kActionDim = 2;
inline constexpr double kDt = 0.05;
inline constexpr double kMaxSpeed = 1.0;
inline constexpr double kStartRadius = 0.2;

// A planar waypoint-chasing task. M = 1 is the short-horizon family,
// M >= 5 the long-horizon one.
struct TaskSpec {
  int task_id = 0;
  std::vector<Point> waypoints;  // visited in order
  double success_radius = 0.08;
  int step_limit = 60;  // T_max in low-level steps

  int num_waypoints() const { return static_cast<int>(waypoints.size()); }
  void validate() const;
};

struct EnvState {
  Point position{0.0, 0.0};
  int progress = 0;  // next unvisited waypoint index
  int step_count = 0;
  bool done = false;
  bool succeeded = false;
};

// H velocity commands, stored flat [h * kActionDim + d], each component
// clipped to [-kMaxSpeed, kMaxSpeed] on construction.
struct ActionChunk {
  int horizon = 0;
  std::vector<double> data;

  static ActionChunk zeros(int horizon);
  static ActionChunk from_flat(int horizon, std::vector<double> flat);

  double& at(int h, int d) { return data[static_cast<std::size_t>(h) * kActionDim + d]; }
  double at(int h, int d) const {
    return data[static_cast<std::size_t>(h) * kActionDim + d];
  }
  int flat_dim() const { return horizon * kActionDim; }
};

// Observation layout: position (2) | one-hot task id (num_tasks) |
// progress / M | step_count / T_max.
int observation_dim(int num_tasks);
std::vector<double> make_observation(const EnvState& s, const TaskSpec& spec,
                                     int num_tasks);

// The two stock task families used throughout: Reach-1 (task 0) and
// Chain-5 (task 1).
std::vector<TaskSpec> default_tasks();

}  // namespace fleetflow::env
