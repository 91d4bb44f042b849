#include <doctest.h>

#include <cmath>

#include "fleetflow/asymmetric.hpp"
#include "fleetflow/critic.hpp"
#include "fleetflow/errors.hpp"
#include "fleetflow/td.hpp"
#include "fleetflow/value_model.hpp"
#include "oracles.hpp"

using namespace fleetflow;
using namespace fleetflow::value;

namespace {
const ValueSupport kSupport{};  // 201 atoms on [-0.1, 1.1]
}

TEST_CASE("c51_project: atom hit is an exact one-hot") {
  for (int j : {0, 1, 57, 100, 200}) {
    auto dist = c51_project(kSupport.atom(j), kSupport);
    CHECK(dist.probs[j] == 1.0);
    double sum = 0.0;
    for (double p : dist.probs) sum += p;
    CHECK(sum == 1.0);
  }
}

TEST_CASE("c51_project: out-of-range target clips to the boundary atom") {
  auto hi = c51_project(2.0, kSupport);
  CHECK(hi.probs[200] == 1.0);
  auto lo = c51_project(-3.0, kSupport);
  CHECK(lo.probs[0] == 1.0);
}

TEST_CASE("c51_project: midway target splits mass evenly") {
  const double mid = 0.5 * (kSupport.atom(10) + kSupport.atom(11));
  auto dist = c51_project(mid, kSupport);
  CHECK(dist.probs[10] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist.probs[11] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("c51_project: conserves mass and preserves in-range expectations") {
  Rng rng(123);
  for (int i = 0; i < 1000; ++i) {
    const double target = rng.uniform(kSupport.v_min, kSupport.v_max);
    auto dist = c51_project(target, kSupport);
    double sum = 0.0, mean = 0.0;
    for (int j = 0; j < kSupport.atoms; ++j) {
      sum += dist.probs[j];
      mean += dist.probs[j] * kSupport.atom(j);
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    REQUIRE(std::abs(mean - target) <= 1e-12);
    dist.validate();
  }
}

TEST_CASE("quantile: one-hot returns its atom for every tau") {
  auto dist = c51_project(kSupport.atom(42), kSupport);
  for (double tau : {0.01, 0.25, 0.5, 0.75, 0.99})
    CHECK(quantile(dist, tau) == kSupport.atom(42));
}

TEST_CASE("quantile: CDF crossing rule on a two-atom distribution") {
  CategoricalValueDistribution dist;
  dist.support = ValueSupport{2, 0.0, 1.0};
  dist.probs = {0.5, 0.5};
  CHECK(quantile(dist, 0.4) == 0.0);
  CHECK(quantile(dist, 0.5) == 0.0);  // F(0) = 0.5 >= 0.5
  CHECK(quantile(dist, 0.6) == 1.0);
  CHECK_THROWS_AS(quantile(dist, 0.0), ContractError);
  CHECK_THROWS_AS(quantile(dist, 1.0), ContractError);
}

TEST_CASE("quantile agrees with a linear CDF-scan oracle on random distributions") {
  Rng rng(321);
  for (int i = 0; i < 2000; ++i) {
    CategoricalValueDistribution dist;
    dist.support = kSupport;
    dist.probs.assign(kSupport.atoms, 0.0);
    double sum = 0.0;
    for (double& p : dist.probs) {
      p = rng.uniform() < 0.9 ? 0.0 : rng.uniform();
      sum += p;
    }
    if (sum == 0.0) dist.probs[0] = sum = 1.0;
    for (double& p : dist.probs) p /= sum;
    const double tau = rng.uniform(0.01, 0.99);
    const double want = oracle::cdf_scan_quantile(
        dist.probs, [&](int j) { return kSupport.atom(j); }, tau);
    CHECK(quantile(dist, tau) == want);
  }
}

TEST_CASE("normalized entropy: one-hot is exactly zero, uniform is one") {
  auto onehot = c51_project(kSupport.atom(7), kSupport);
  CHECK(normalized_entropy(onehot) == 0.0);

  CategoricalValueDistribution uniform;
  uniform.support = kSupport;
  uniform.probs.assign(kSupport.atoms, 1.0 / kSupport.atoms);
  CHECK(normalized_entropy(uniform) == doctest::Approx(1.0).epsilon(1e-12));

  // Two equal atoms among K = 201.
  CategoricalValueDistribution two;
  two.support = kSupport;
  two.probs.assign(kSupport.atoms, 0.0);
  two.probs[3] = 0.5;
  two.probs[90] = 0.5;
  CHECK(normalized_entropy(two) ==
        doctest::Approx(std::log(2.0) / std::log(201.0)).epsilon(1e-12));
  CHECK(normalized_entropy(two) == doctest::Approx(0.13066).epsilon(1e-4));
}

TEST_CASE("adaptive_tau: schedule endpoints and monotonicity in entropy") {
  TauSchedule offline{0.6, 0.3, 0.3, 0.95};
  auto onehot = c51_project(0.5, ValueSupport{201, -0.1, 1.1});
  // Exact atom hits have zero entropy.
  auto exact = c51_project(kSupport.atom(100), kSupport);
  CHECK(adaptive_tau(exact, offline) == doctest::Approx(0.6));

  CategoricalValueDistribution uniform;
  uniform.support = kSupport;
  uniform.probs.assign(kSupport.atoms, 1.0 / kSupport.atoms);
  CHECK(adaptive_tau(uniform, offline) == doctest::Approx(0.3).epsilon(1e-9));

  TauSchedule constant{0.52, 0.0, 0.3, 0.95};
  CHECK(adaptive_tau(uniform, constant) == doctest::Approx(0.52));
  CHECK(adaptive_tau(exact, constant) == doctest::Approx(0.52));
  (void)onehot;

  // Non-increasing in entropy across a sweep of mixtures.
  double prev_tau = 1.0;
  for (int k = 1; k <= 201; k += 20) {
    CategoricalValueDistribution d;
    d.support = kSupport;
    d.probs.assign(kSupport.atoms, 0.0);
    for (int i = 0; i < k; ++i) d.probs[i] = 1.0 / k;
    const double t = adaptive_tau(d, offline);
    CHECK(t <= prev_tau + 1e-15);
    CHECK(t >= offline.tau_min);
    CHECK(t <= offline.tau_max);
    prev_tau = t;
  }
}

TEST_CASE("value loss: matched logits give entropy loss and ~zero gradient") {
  const ValueSupport support{5, 0.0, 1.0};
  const double target = 0.62;
  auto m = c51_project(target, support);
  // Build a 1-layer net with zero weights and biases = log target probs.
  auto layout = nn::DenseNet::make_layout({2, 5});
  nn::ParamVector p = nn::ParamVector::zeros(layout);
  for (int i = 0; i < 5; ++i)
    p.tensor(1)[i] = std::log(std::max(m.probs[i], 1e-12));
  ValueModel psi(ValueModel::Mode::distributional, nn::DenseNet({2, 5}, p),
                 support);
  nn::ParamVector grads = nn::ParamVector::zeros(layout);
  nn::DenseNet::Workspace ws;
  const std::vector<double> obs{0.0, 0.0};
  const double loss = psi.loss_accum(obs, target, 0.0, grads, ws);
  double want_entropy = 0.0;
  for (double q : m.probs)
    if (q > 0.0) want_entropy -= q * std::log(q);
  CHECK(loss == doctest::Approx(want_entropy).epsilon(1e-9));
  for (double g : grads.values) CHECK(std::abs(g) < 1e-9);
}

TEST_CASE("value loss: one-hot target under uniform logits costs log K") {
  const ValueSupport support{201, -0.1, 1.1};
  auto layout = nn::DenseNet::make_layout({3, 201});
  ValueModel psi(ValueModel::Mode::distributional,
                 nn::DenseNet({3, 201}, nn::ParamVector::zeros(layout)),
                 support);
  nn::ParamVector grads = nn::ParamVector::zeros(layout);
  nn::DenseNet::Workspace ws;
  const double loss =
      psi.loss_accum(std::vector<double>{0.1, 0.2, 0.3}, support.atom(9), 0.0,
                     grads, ws);
  CHECK(loss == doctest::Approx(std::log(201.0)).epsilon(1e-12));
}

TEST_CASE("value loss gradient matches finite differences (distributional and expectile)") {
  for (int seed = 0; seed < 25; ++seed) {
    Rng rng(9000 + seed);
    const ValueSupport support{31, -0.1, 1.1};
    const std::vector<int> widths{4, 6, 31};
    ValueModel psi = ValueModel::init(ValueModel::Mode::distributional, 4,
                                      {6}, support, rng);
    std::vector<double> obs(4);
    for (double& v : obs) v = rng.uniform(-1.0, 1.0);
    const double target = rng.uniform(0.0, 1.0);

    nn::ParamVector grads = nn::ParamVector::zeros(psi.net().params().layout);
    nn::DenseNet::Workspace ws;
    psi.loss_accum(obs, target, 0.0, grads, ws);

    auto f = [&](const std::vector<double>& flat) {
      auto logits = oracle::naive_dense_forward(widths, flat, obs);
      double mx = logits[0];
      for (double z : logits) mx = std::max(mx, z);
      double lse = 0.0;
      for (double z : logits) lse += std::exp(z - mx);
      lse = mx + std::log(lse);
      auto m = c51_project(target, support);
      double loss = 0.0;
      for (int i = 0; i < 31; ++i)
        if (m.probs[i] > 0.0) loss -= m.probs[i] * (logits[i] - lse);
      return loss;
    };
    for (std::size_t i = 0; i < grads.values.size(); ++i) {
      const double fd = oracle::central_diff(f, psi.net().params().values, i);
      REQUIRE(oracle::grad_close(grads.values[i], fd));
    }

    // Expectile (scalar) mode against the asymmetric squared loss.
    ValueModel scalar = ValueModel::init(ValueModel::Mode::expectile, 4, {6},
                                         support, rng);
    const double tau = rng.uniform(0.1, 0.9);
    nn::ParamVector sgrads = nn::ParamVector::zeros(scalar.net().params().layout);
    scalar.loss_accum(obs, target, tau, sgrads, ws);
    auto fs = [&](const std::vector<double>& flat) {
      auto out = oracle::naive_dense_forward({4, 6, 1}, flat, obs);
      const double u = target - out[0];
      return std::abs(tau - (u < 0.0 ? 1.0 : 0.0)) * u * u;
    };
    for (std::size_t i = 0; i < sgrads.values.size(); ++i) {
      const double fd = oracle::central_diff(fs, scalar.net().params().values, i);
      REQUIRE(oracle::grad_close(sgrads.values[i], fd));
    }
  }
}

TEST_CASE("critic: loss is zero when both heads hit the target, 2 delta^2 otherwise") {
  CriticConfig cfg;
  cfg.obs_dim = 3;
  cfg.horizon = 4;
  cfg.embed_dim = 5;
  cfg.hidden = {6};
  Rng rng(55);
  Critic critic = Critic::init(cfg, rng);
  Critic::Workspace ws;
  std::vector<double> obs{0.1, -0.2, 0.3};
  std::vector<double> chunk(8, 0.05);
  const auto eval = critic.forward(obs, chunk, ws);

  nn::ParamVector grads = nn::ParamVector::zeros(critic.params().layout);
  // Target exactly between the heads at distance delta each: loss = 2 delta^2.
  const double y = 0.5 * (eval.q1 + eval.q2);
  const double delta = eval.q1 - y;
  const double loss = critic_loss_accum(critic, obs, chunk, y, grads, ws);
  CHECK(loss == doctest::Approx(2.0 * delta * delta).epsilon(1e-12));

  // Both heads equal to the target: zero loss (degenerate single-atom case).
  nn::ParamVector grads2 = nn::ParamVector::zeros(critic.params().layout);
  const double loss_q1 = critic_loss_accum(critic, obs, chunk, eval.q1, grads2, ws);
  const double d2 = eval.q2 - eval.q1;
  CHECK(loss_q1 == doctest::Approx(d2 * d2).epsilon(1e-12));
}

TEST_CASE("q_min picks the smaller head and ties differentiate through head 1") {
  CriticConfig cfg;
  cfg.obs_dim = 2;
  cfg.horizon = 3;
  cfg.embed_dim = 4;
  cfg.hidden = {5};
  Rng rng(66);
  Critic critic = Critic::init(cfg, rng);
  Critic::Workspace ws;
  std::vector<double> obs{0.4, -0.1};
  std::vector<double> chunk(6, -0.2);
  auto eval = critic.forward(obs, chunk, ws);
  CHECK(critic.q_min(obs, chunk, ws) == std::min(eval.q1, eval.q2));

  // Force an exact tie by copying trunk 1's parameters into trunk 2.
  auto layout = critic.params().layout;
  nn::ParamVector tied = critic.params();
  const std::size_t per_trunk = 2 * (1 + 1);  // hidden {5} -> 2 layers
  for (std::size_t t = 0; t < per_trunk; ++t) {
    auto src = tied.tensor_span(4 + t);
    auto dst = tied.tensor_span(4 + per_trunk + t);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  Critic tied_critic(cfg, tied);
  auto tie_eval = tied_critic.forward(obs, chunk, ws);
  REQUIRE(tie_eval.q1 == tie_eval.q2);
  std::vector<double> grad_min;
  tied_critic.action_grad_min(obs, chunk, grad_min, ws);
  // Head-1 gradient alone.
  std::vector<double> grad_head1(chunk.size());
  tied_critic.backward_accum(obs, chunk, 1.0, 0.0, nullptr, grad_head1.data(), ws);
  CHECK(grad_min == grad_head1);
}

TEST_CASE("critic gradients match finite differences (params and action)") {
  for (int seed = 0; seed < 25; ++seed) {
    CriticConfig cfg;
    cfg.obs_dim = 3;
    cfg.horizon = 3;
    cfg.embed_dim = 4;
    cfg.hidden = {5, 4};
    Rng rng(4000 + seed);
    Critic critic = Critic::init(cfg, rng);
    Critic::Workspace ws;
    std::vector<double> obs(3), chunk(6);
    for (double& v : obs) v = rng.uniform(-1.0, 1.0);
    for (double& v : chunk) v = rng.uniform(-1.0, 1.0);
    const double u1 = rng.uniform(-1.0, 1.0);
    const double u2 = rng.uniform(-1.0, 1.0);

    nn::ParamVector grads = nn::ParamVector::zeros(critic.params().layout);
    std::vector<double> agrad(6);
    critic.backward_accum(obs, chunk, u1, u2, &grads, agrad.data(), ws);

    auto eval_with = [&](const nn::ParamVector& p,
                         const std::vector<double>& a) {
      Critic c(cfg, p);
      Critic::Workspace w2;
      auto e = c.forward(obs, a, w2);
      return u1 * e.q1 + u2 * e.q2;
    };
    nn::ParamVector probe = critic.params();
    for (std::size_t i = 0; i < probe.values.size(); ++i) {
      const double orig = probe.values[i];
      probe.values[i] = orig + 1e-4;
      const double up = eval_with(probe, chunk);
      probe.values[i] = orig - 1e-4;
      const double down = eval_with(probe, chunk);
      probe.values[i] = orig;
      REQUIRE(oracle::grad_close(grads.values[i], (up - down) / 2e-4));
    }
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      std::vector<double> probe_chunk = chunk;
      probe_chunk[i] = chunk[i] + 1e-4;
      const double up = eval_with(critic.params(), probe_chunk);
      probe_chunk[i] = chunk[i] - 1e-4;
      const double down = eval_with(critic.params(), probe_chunk);
      REQUIRE(oracle::grad_close(agrad[i], (up - down) / 2e-4));
    }
  }
}

TEST_CASE("td_target: terminal window is the pure discounted reward sum") {
  Rng rng(12);
  ValueModel psi = ValueModel::init(ValueModel::Mode::distributional, 3, {8},
                                    kSupport, rng);
  nn::DenseNet::Workspace ws;
  replay::NStepSample s;
  s.effective_n = 1;
  s.chunk_rewards = {0.75};
  auto out = td_target(s, psi, TauSchedule{}, 0.9999, 30, ws);
  CHECK(out.target == 0.75);
  CHECK(!out.bootstrapped);
}

TEST_CASE("td_target: bootstrap discounts a one-hot quantile by gamma^H") {
  // Freeze a value head that always emits a one-hot at 0.8.
  const ValueSupport support{201, -0.1, 1.1};
  auto m = c51_project(0.8, support);
  int atom_idx = 0;
  for (int i = 0; i < support.atoms; ++i)
    if (m.probs[i] > 0.999) atom_idx = i;
  REQUIRE(m.probs[atom_idx] == 1.0);  // 0.8 lies on the grid
  auto layout = nn::DenseNet::make_layout({3, 201});
  nn::ParamVector p = nn::ParamVector::zeros(layout);
  p.tensor(1)[atom_idx] = 50.0;  // softmax saturates to one-hot
  ValueModel psi(ValueModel::Mode::distributional, nn::DenseNet({3, 201}, p),
                 support);

  replay::NStepSample s;
  s.effective_n = 1;
  s.chunk_rewards = {0.0};
  s.bootstrap_obs = std::vector<double>{0.0, 0.0, 0.0};
  nn::DenseNet::Workspace ws;
  auto out = td_target(s, psi, TauSchedule{0.6, 0.3, 0.3, 0.95}, 0.9999, 30, ws);
  CHECK(out.bootstrapped);
  CHECK(out.quantile_value == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(out.target == doctest::Approx(std::pow(0.9999, 30) * 0.8).epsilon(1e-9));
  CHECK(out.target == doctest::Approx(0.79760).epsilon(1e-4));
}

TEST_CASE("asymmetric routes: median of {1,2,3}") {
  auto cmp = compare_asymmetric_routes({1.0, 2.0, 3.0}, 0.5, 1,
                                       ValueSupport{401, 0.0, 4.0});
  CHECK(cmp.direct == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cmp.extracted == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("asymmetric routes: 0.9-quantile of {0, 0, 1}") {
  auto cmp = compare_asymmetric_routes({0.0, 0.0, 1.0}, 0.9, 1,
                                       ValueSupport{201, -0.1, 1.1});
  CHECK(cmp.direct == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cmp.extracted == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("asymmetric routes agree within two atom widths across a random sweep") {
  Rng rng(777);
  const ValueSupport support{201, -0.1, 1.1};
  const double two_atoms = 2.0 * support.delta();
  for (int set = 0; set < 200; ++set) {
    // 37 samples so tau * n never lands on an integer for tau in the grid.
    std::vector<double> samples(37);
    const double center = rng.uniform(0.2, 0.8);
    for (double& v : samples) {
      const double draw = center + 0.25 * rng.normal();
      v = std::clamp(draw, 0.0, 1.0);
    }
    for (int t = 1; t <= 9; ++t) {
      const double tau = t / 10.0;
      for (int p : {1, 2}) {
        auto cmp = compare_asymmetric_routes(samples, tau, p, support);
        REQUIRE(std::abs(cmp.direct - cmp.extracted) <= two_atoms);
      }
    }
  }
}

TEST_CASE("categorical expectile: symmetric tau recovers the mean") {
  auto dist = fit_categorical({0.2, 0.4, 0.9}, kSupport);
  const double mean = (0.2 + 0.4 + 0.9) / 3.0;
  CHECK(categorical_expectile(dist, 0.5) == doctest::Approx(mean).epsilon(1e-6));
}
