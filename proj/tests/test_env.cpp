#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fleetflow/datagen.hpp"
#include "fleetflow/errors.hpp"
#include "oracles.hpp"

using namespace fleetflow;
using namespace fleetflow::env;

namespace {
double dist(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Straight-line step budget for the noise-free expert: per segment,
// ceil(distance / per-step travel), worst-case start at the far edge of the
// start disc, plus 10% slack.
int expert_step_budget(const TaskSpec& spec) {
  double total_steps = 0.0;
  Point prev{0.0, 0.0};
  for (std::size_t k = 0; k < spec.waypoints.size(); ++k) {
    double d = dist(prev, spec.waypoints[k]);
    if (k == 0) d += kStartRadius;
    total_steps += std::ceil(d / (kMaxSpeed * kDt));
    prev = spec.waypoints[k];
  }
  return static_cast<int>(std::ceil(total_steps * 1.1));
}
}  // namespace

TEST_CASE("reset: fixed seed reproduces the start position") {
  auto tasks = default_tasks();
  Rng a(42), b(42);
  EnvState s1 = reset(tasks[0], a);
  EnvState s2 = reset(tasks[0], b);
  CHECK(s1.position == s2.position);
  CHECK(s1.progress == 0);
  CHECK(s1.step_count == 0);
  CHECK(!s1.done);
}

TEST_CASE("reset: start distribution is uniform on the disc (chi-square)") {
  auto tasks = default_tasks();
  // 4 equal-area radial shells x 4 quadrants = 16 equal-probability bins.
  std::vector<int> counts(16, 0);
  Rng rng(7);
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    EnvState s = reset(tasks[0], rng);
    const double r = std::hypot(s.position[0], s.position[1]);
    REQUIRE(r <= kStartRadius + 1e-12);
    int shell = static_cast<int>(std::floor(4.0 * (r / kStartRadius) *
                                            (r / kStartRadius)));
    shell = std::min(shell, 3);
    double theta = std::atan2(s.position[1], s.position[0]);
    if (theta < 0) theta += 2.0 * M_PI;
    const int quad = std::min(3, static_cast<int>(theta / (M_PI / 2.0)));
    counts[shell * 4 + quad] += 1;
  }
  const double expected = n / 16.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < oracle::kChiSq15At01);
}

TEST_CASE("step_chunk: zero chunk far from the waypoint makes no progress") {
  auto tasks = default_tasks();
  EnvState s;
  s.position = {-0.5, -0.5};
  auto out = step_chunk(s, tasks[0], ActionChunk::zeros(10));
  CHECK(out.next.progress == 0);
  for (double r : out.rewards) CHECK(r == 0.0);
  CHECK(!out.succeeded);
}

TEST_CASE("step_chunk: starting at the waypoint of a 1-waypoint task succeeds immediately") {
  TaskSpec spec;
  spec.task_id = 0;
  spec.waypoints = {{0.0, 0.0}};
  spec.step_limit = 60;
  EnvState s;
  s.position = {0.0, 0.0};
  auto out = step_chunk(s, spec, ActionChunk::zeros(5));
  REQUIRE(out.rewards.size() == 1);
  CHECK(out.rewards[0] == 1.0);
  CHECK(out.succeeded);
  CHECK(out.next.done);
}

TEST_CASE("step_chunk: finished episode is a contract violation") {
  auto tasks = default_tasks();
  EnvState s;
  s.done = true;
  CHECK_THROWS_AS(step_chunk(s, tasks[0], ActionChunk::zeros(1)), ContractError);
}

TEST_CASE("scripted expert: noise-free run succeeds within the analytic budget") {
  auto tasks = default_tasks();
  const TaskSpec& chain = tasks[1];
  const int budget = expert_step_budget(chain);
  REQUIRE(budget <= chain.step_limit);
  Rng rng(99);
  for (int ep = 0; ep < 100; ++ep) {
    Rng env_rng = rng.fork(ep);
    Rng noise_rng = rng.fork(1000 + ep);
    EnvState s = reset(chain, env_rng);
    int steps = 0;
    while (!s.done) {
      auto chunk = scripted_expert(s, chain, 30, 0.0, noise_rng);
      auto out = step_chunk(s, chain, chunk);
      steps += static_cast<int>(out.rewards.size());
      s = out.next;
    }
    REQUIRE(s.succeeded);
    REQUIRE(steps <= budget);
  }
}

TEST_CASE("scripted expert: noise-free chunk points at the waypoint") {
  TaskSpec spec;
  spec.waypoints = {{0.6, 0.0}};
  spec.step_limit = 60;
  EnvState s;
  s.position = {0.0, 0.0};
  Rng rng(3);
  auto chunk = scripted_expert(s, spec, 1, 0.0, rng);
  CHECK(chunk.at(0, 0) == doctest::Approx(1.0));
  CHECK(chunk.at(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("scripted expert: large noise produces failures") {
  auto tasks = default_tasks();
  Rng rng(11);
  int failures = 0;
  for (int ep = 0; ep < 50; ++ep) {
    RolloutOptions opts;
    opts.horizon = 30;
    Episode e = run_episode(
        tasks[1],
        [](const EnvState& s, const TaskSpec& sp, Rng& r) {
          return scripted_expert(s, sp, 30, 1.2, r);
        },
        rng.next_u64(), opts, "noisy");
    if (!e.success) ++failures;
  }
  CHECK(failures > 0);
}

TEST_CASE("intervention oracle: moving toward the waypoint is left alone") {
  auto tasks = default_tasks();
  InterventionOracle oracle(3, 0.0);
  EnvState s;
  s.position = {-0.8, 0.0};
  Rng rng(5);
  for (int i = 0; i < 6; ++i) {
    oracle.observe_chunk_start(s, tasks[0]);
    CHECK(!oracle.maybe_intervene(s, tasks[0], 30, rng).has_value());
    s.position[0] += 0.2;  // straight toward (0.5, 0.3)-ish
  }
}

TEST_CASE("intervention oracle: stalling away from the waypoint triggers an expert chunk") {
  auto tasks = default_tasks();
  InterventionOracle oracle(3, 0.0);
  EnvState s;
  s.position = {-0.2, 0.0};
  Rng rng(6);
  // Drift away from the waypoint for window+1 observations.
  for (int i = 0; i < 4; ++i) {
    oracle.observe_chunk_start(s, tasks[0]);
    s.position[0] -= 0.05;
  }
  auto chunk = oracle.maybe_intervene(s, tasks[0], 30, rng);
  REQUIRE(chunk.has_value());
  CHECK(chunk->at(0, 0) > 0.0);  // pointing back toward the waypoint
}

TEST_CASE("intervention oracle: disabled window never intervenes") {
  auto tasks = default_tasks();
  InterventionOracle oracle(0, 0.0);
  EnvState s;
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    oracle.observe_chunk_start(s, tasks[0]);
    CHECK(!oracle.maybe_intervene(s, tasks[0], 30, rng).has_value());
    s.position[0] -= 0.05;
  }
}

TEST_CASE("episodes: reward sparsity matches the success label and runs are deterministic") {
  auto tasks = default_tasks();
  DataGenConfig cfg;
  cfg.per_task = {{4, 4, 3}, {3, 3, 3}};
  auto eps = generate_offline_buffer(tasks, cfg, 2024);
  REQUIRE(eps.size() == 4u + 4u + 3u + 3u + 3u + 3u);
  for (const auto& ep : eps) {
    double total = 0.0;
    for (const auto& st : ep.steps) total += st.reward;
    CHECK(total == (ep.success ? 1.0 : 0.0));
    if (ep.source == EpisodeSource::demo) CHECK(ep.success);
    if (ep.source == EpisodeSource::play) CHECK(!ep.success);
  }
  auto eps2 = generate_offline_buffer(tasks, cfg, 2024);
  REQUIRE(eps2.size() == eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i)
    CHECK(episode_to_json_line(eps[i]) == episode_to_json_line(eps2[i]));
}

TEST_CASE("generate_offline_buffer: zero counts give an empty buffer") {
  auto tasks = default_tasks();
  DataGenConfig cfg;
  cfg.per_task = {{0, 0, 0}, {0, 0, 0}};
  CHECK(generate_offline_buffer(tasks, cfg, 1).empty());
}

TEST_CASE("generate_offline_buffer: demo quota is success-only") {
  auto tasks = default_tasks();
  DataGenConfig cfg;
  cfg.per_task = {{50, 0, 0}, {0, 0, 0}};
  auto eps = generate_offline_buffer(tasks, cfg, 5);
  REQUIRE(eps.size() == 50);
  for (const auto& ep : eps) {
    CHECK(ep.success);
    CHECK(ep.source == EpisodeSource::demo);
  }
}

TEST_CASE("episode log round-trips through JSONL") {
  auto tasks = default_tasks();
  DataGenConfig cfg;
  cfg.per_task = {{2, 1, 1}, {1, 1, 1}};
  auto eps = generate_offline_buffer(tasks, cfg, 77);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ff_eplog_test.jsonl").string();
  write_episode_log(path, eps);
  auto back = read_episode_log(path);
  REQUIRE(back.size() == eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i)
    CHECK(episode_to_json_line(back[i]) == episode_to_json_line(eps[i]));
  std::filesystem::remove(path);
}
