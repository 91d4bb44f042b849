#include "fleetflow/critic.hpp"

#include <cmath>
#include <cstring>

#include "fleetflow/value_model.hpp"

namespace fleetflow::value {

namespace {
// Tensor order within the layout.
constexpr std::size_t kEmbedW = 0;
constexpr std::size_t kEmbedB = 1;
constexpr std::size_t kScoreW = 2;
constexpr std::size_t kScoreB = 3;
constexpr std::size_t kTrunkFirst = 4;
}  // namespace

nn::LayoutPtr Critic::make_layout(const CriticConfig& cfg) {
  if (cfg.obs_dim <= 0 || cfg.horizon <= 0 || cfg.embed_dim <= 0)
    throw ContractError("Critic: invalid configuration");
  auto layout = std::make_shared<nn::Layout>();
  layout->add("embed_w", cfg.embed_dim, env::kActionDim);
  layout->add("embed_b", cfg.embed_dim, 1);
  layout->add("score_w", 1, cfg.embed_dim);
  layout->add("score_b", 1, 1);
  std::vector<int> widths;
  widths.push_back(cfg.obs_dim + cfg.embed_dim);
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(1);
  for (int trunk = 1; trunk <= 2; ++trunk)
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      const std::string tag = "t" + std::to_string(trunk);
      layout->add(tag + "_w" + std::to_string(l), widths[l + 1], widths[l]);
      layout->add(tag + "_b" + std::to_string(l), widths[l + 1], 1);
    }
  return layout;
}

Critic::Critic(CriticConfig cfg, nn::ParamVector params)
    : cfg_(std::move(cfg)), params_(std::move(params)) {
  auto expected = make_layout(cfg_);
  if (!params_.layout || !(*params_.layout == *expected))
    throw ContractError("Critic: params do not match configuration");
  trunk_widths_.push_back(cfg_.obs_dim + cfg_.embed_dim);
  trunk_widths_.insert(trunk_widths_.end(), cfg_.hidden.begin(),
                       cfg_.hidden.end());
  trunk_widths_.push_back(1);
  const std::size_t per_trunk = 2 * (trunk_widths_.size() - 1);
  trunk1_first_tensor_ = kTrunkFirst;
  trunk2_first_tensor_ = kTrunkFirst + per_trunk;
}

Critic Critic::init(const CriticConfig& cfg, Rng& rng) {
  auto layout = make_layout(cfg);
  nn::ParamVector p = nn::ParamVector::zeros(layout);
  for (std::size_t i = 0; i < layout->tensor_count(); ++i) {
    const auto& d = layout->desc(i);
    // fan_in for weight matrices is the column count; biases share their
    // layer's scale.
    const std::size_t fan_in = d.cols > 1 ? d.cols : 1;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : p.tensor_span(i)) v = rng.uniform(-bound, bound);
  }
  return Critic(cfg, std::move(p));
}

void Critic::set_params(nn::ParamVector p) {
  nn::check_same_layout(params_, p, "Critic::set_params");
  params_ = std::move(p);
}

CriticPair CriticPair::init(const CriticConfig& cfg, Rng& rng) {
  Critic online = Critic::init(cfg, rng);
  Critic target = online;  // target starts as an exact copy
  return CriticPair{std::move(online), std::move(target)};
}

Critic::Eval Critic::forward(std::span<const double> obs,
                             std::span<const double> chunk,
                             Workspace& ws) const {
  return backward_accum(obs, chunk, 0.0, 0.0, nullptr, nullptr, ws);
}

double Critic::q_min(std::span<const double> obs, std::span<const double> chunk,
                     Workspace& ws) const {
  return forward(obs, chunk, ws).min();
}

Critic::Eval Critic::backward_accum(std::span<const double> obs,
                                    std::span<const double> chunk, double u1,
                                    double u2, nn::ParamVector* grad_accum,
                                    double* action_grad, Workspace& ws) const {
  const int h = cfg_.horizon;
  const int de = cfg_.embed_dim;
  if (obs.size() != static_cast<std::size_t>(cfg_.obs_dim))
    throw ContractError("Critic: observation dimension mismatch");
  if (chunk.size() != static_cast<std::size_t>(h) * env::kActionDim)
    throw ContractError("Critic: chunk dimension mismatch");
  if (grad_accum) nn::check_same_layout(*grad_accum, params_, "Critic::backward");

  // --- forward ---
  ws.embeds.resize(static_cast<std::size_t>(h) * de);
  ws.scores.resize(h);
  const double* embed_w = params_.tensor(kEmbedW);
  const double* embed_b = params_.tensor(kEmbedB);
  const double* score_w = params_.tensor(kScoreW);
  const double score_b = params_.tensor(kScoreB)[0];
  for (int t = 0; t < h; ++t) {
    double* e = ws.embeds.data() + static_cast<std::size_t>(t) * de;
    nn::affine_forward(embed_w, embed_b, chunk.data() + t * env::kActionDim, e,
                       de, env::kActionDim);
    double z = score_b;
    for (int i = 0; i < de; ++i) {
      e[i] = std::tanh(e[i]);
      z += score_w[i] * e[i];
    }
    ws.scores[t] = z;
  }
  ws.alphas = ws.scores;
  softmax_inplace(ws.alphas);
  ws.pooled.assign(de, 0.0);
  for (int t = 0; t < h; ++t) {
    const double* e = ws.embeds.data() + static_cast<std::size_t>(t) * de;
    for (int i = 0; i < de; ++i) ws.pooled[i] += ws.alphas[t] * e[i];
  }
  ws.trunk_in.resize(cfg_.obs_dim + de);
  std::memcpy(ws.trunk_in.data(), obs.data(), sizeof(double) * cfg_.obs_dim);
  std::memcpy(ws.trunk_in.data() + cfg_.obs_dim, ws.pooled.data(),
              sizeof(double) * de);

  const std::size_t layers = trunk_widths_.size() - 1;
  auto run_trunk = [&](std::size_t first_tensor,
                       std::vector<std::vector<double>>& acts) -> double {
    acts.resize(trunk_widths_.size());
    acts[0] = ws.trunk_in;
    for (std::size_t l = 0; l < layers; ++l) {
      auto& out = acts[l + 1];
      out.resize(trunk_widths_[l + 1]);
      nn::affine_forward(params_.tensor(first_tensor + 2 * l),
                         params_.tensor(first_tensor + 2 * l + 1),
                         acts[l].data(), out.data(), trunk_widths_[l + 1],
                         trunk_widths_[l]);
      if (l + 1 < layers)
        for (double& v : out) v = std::tanh(v);
      for (double v : out)
        if (!std::isfinite(v))
          throw NumericError("Critic: non-finite trunk activation at layer " +
                             std::to_string(l));
    }
    return acts.back()[0];
  };
  Eval eval;
  eval.q1 = run_trunk(trunk1_first_tensor_, ws.acts1);
  eval.q2 = run_trunk(trunk2_first_tensor_, ws.acts2);
  if (!grad_accum && !action_grad) return eval;

  // --- backward ---
  ws.dtrunk_in.assign(cfg_.obs_dim + de, 0.0);
  nn::ParamVector* sink = grad_accum;
  auto back_trunk = [&](std::size_t first_tensor,
                        std::vector<std::vector<double>>& acts, double u) {
    if (u == 0.0) return;
    ws.delta.assign(1, u);
    for (std::size_t l = layers; l-- > 0;) {
      ws.delta_prev.assign(trunk_widths_[l], 0.0);
      nn::affine_backward(params_.tensor(first_tensor + 2 * l), acts[l].data(),
                          ws.delta.data(),
                          sink ? sink->tensor(first_tensor + 2 * l) : nullptr,
                          sink ? sink->tensor(first_tensor + 2 * l + 1) : nullptr,
                          ws.delta_prev.data(), trunk_widths_[l + 1],
                          trunk_widths_[l]);
      if (l > 0) {
        ws.delta.resize(trunk_widths_[l]);
        for (int i = 0; i < trunk_widths_[l]; ++i)
          ws.delta[i] = ws.delta_prev[i] * (1.0 - acts[l][i] * acts[l][i]);
      } else {
        for (int i = 0; i < cfg_.obs_dim + de; ++i)
          ws.dtrunk_in[i] += ws.delta_prev[i];
      }
    }
  };
  back_trunk(trunk1_first_tensor_, ws.acts1, u1);
  back_trunk(trunk2_first_tensor_, ws.acts2, u2);

  const double* dp = ws.dtrunk_in.data() + cfg_.obs_dim;  // d pooled
  // d alpha_t = e_t . dp ; d e_t  += alpha_t * dp
  ws.dembeds.assign(static_cast<std::size_t>(h) * de, 0.0);
  std::vector<double>& dalpha = ws.scores;  // reuse: scores no longer needed
  double alpha_dot = 0.0;
  for (int t = 0; t < h; ++t) {
    const double* e = ws.embeds.data() + static_cast<std::size_t>(t) * de;
    double* dE = ws.dembeds.data() + static_cast<std::size_t>(t) * de;
    double da = 0.0;
    for (int i = 0; i < de; ++i) {
      da += e[i] * dp[i];
      dE[i] += ws.alphas[t] * dp[i];
    }
    dalpha[t] = da;
    alpha_dot += ws.alphas[t] * da;
  }
  double* d_score_w = sink ? sink->tensor(kScoreW) : nullptr;
  double* d_score_b = sink ? sink->tensor(kScoreB) : nullptr;
  if (action_grad)
    std::memset(action_grad, 0, sizeof(double) * h * env::kActionDim);
  ws.dpre.resize(de);
  for (int t = 0; t < h; ++t) {
    const double dz = ws.alphas[t] * (dalpha[t] - alpha_dot);
    const double* e = ws.embeds.data() + static_cast<std::size_t>(t) * de;
    double* dE = ws.dembeds.data() + static_cast<std::size_t>(t) * de;
    if (d_score_b) d_score_b[0] += dz;
    for (int i = 0; i < de; ++i) {
      if (d_score_w) d_score_w[i] += dz * e[i];
      dE[i] += dz * score_w[i];
      ws.dpre[i] = dE[i] * (1.0 - e[i] * e[i]);
    }
    nn::affine_backward(embed_w, chunk.data() + t * env::kActionDim,
                        ws.dpre.data(), sink ? sink->tensor(kEmbedW) : nullptr,
                        sink ? sink->tensor(kEmbedB) : nullptr,
                        action_grad ? action_grad + t * env::kActionDim : nullptr,
                        de, env::kActionDim);
  }
  return eval;
}

Critic::Eval Critic::action_grad_min(std::span<const double> obs,
                                     std::span<const double> chunk,
                                     std::vector<double>& grad_out,
                                     Workspace& ws) const {
  grad_out.resize(chunk.size());
  Eval probe = forward(obs, chunk, ws);
  const bool head1 = probe.q1 <= probe.q2;
  return backward_accum(obs, chunk, head1 ? 1.0 : 0.0, head1 ? 0.0 : 1.0,
                        nullptr, grad_out.data(), ws);
}

double critic_loss_accum(const Critic& critic, std::span<const double> obs,
                         std::span<const double> chunk, double target,
                         nn::ParamVector& grad_accum, Critic::Workspace& ws) {
  if (!std::isfinite(target)) throw NumericError("critic_loss: non-finite target");
  Critic::Eval eval = critic.forward(obs, chunk, ws);
  const double u1 = 2.0 * (eval.q1 - target);
  const double u2 = 2.0 * (eval.q2 - target);
  critic.backward_accum(obs, chunk, u1, u2, &grad_accum, nullptr, ws);
  const double d1 = eval.q1 - target;
  const double d2 = eval.q2 - target;
  return d1 * d1 + d2 * d2;
}

}  // namespace fleetflow::value
