#include "fleetflow/task.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::env {

void TaskSpec::validate() const {
  if (waypoints.empty()) throw ContractError("TaskSpec: need at least one waypoint");
  if (success_radius <= 0.0)
    throw ContractError("TaskSpec: success radius must be positive");
  if (step_limit < 1) throw ContractError("TaskSpec: step limit must be >= 1");
  for (std::size_t i = 0; i < waypoints.size(); ++i)
    for (std::size_t j = i + 1; j < waypoints.size(); ++j)
      if (waypoints[i] == waypoints[j])
        throw ContractError("TaskSpec: waypoints must be distinct");
}

ActionChunk ActionChunk::zeros(int horizon) {
  ActionChunk c;
  c.horizon = horizon;
  c.data.assign(static_cast<std::size_t>(horizon) * kActionDim, 0.0);
  return c;
}

ActionChunk ActionChunk::from_flat(int horizon, std::vector<double> flat) {
  if (flat.size() != static_cast<std::size_t>(horizon) * kActionDim)
    throw ContractError("ActionChunk: flat size does not match horizon");
  for (double& v : flat) {
    if (!std::isfinite(v)) throw NumericError("ActionChunk: non-finite command");
    v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
  }
  ActionChunk c;
  c.horizon = horizon;
  c.data = std::move(flat);
  return c;
}

int observation_dim(int num_tasks) { return 2 + num_tasks + 2; }

std::vector<double> make_observation(const EnvState& s, const TaskSpec& spec,
                                     int num_tasks) {
  std::vector<double> obs;
  obs.reserve(observation_dim(num_tasks));
  obs.push_back(s.position[0]);
  obs.push_back(s.position[1]);
  for (int k = 0; k < num_tasks; ++k)
    obs.push_back(k == spec.task_id ? 1.0 : 0.0);
  obs.push_back(static_cast<double>(s.progress) / spec.num_waypoints());
  obs.push_back(static_cast<double>(s.step_count) / spec.step_limit);
  return obs;
}

std::vector<TaskSpec> default_tasks() {
  TaskSpec reach;
  reach.task_id = 0;
  reach.waypoints = {{0.5, 0.3}};
  reach.step_limit = 60;

  TaskSpec chain;
  chain.task_id = 1;
  chain.waypoints = {{0.7, 0.1}, {-0.5, 0.5}, {0.5, 0.8}, {-0.6, -0.4}, {0.4, -0.7}};
  chain.step_limit = 600;

  return {reach, chain};
}

}  // namespace fleetflow::env
