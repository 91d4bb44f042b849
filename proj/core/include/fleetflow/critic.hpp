#pragma once

#include "fleetflow/dense_net.hpp"
#include "fleetflow/task.hpp"

namespace fleetflow::value {

struct CriticConfig {
  int obs_dim = 0;
  int horizon = 0;
  int embed_dim = 16;
  std::vector<int> hidden{64, 64};
};

// Action-chunk critic: per-step embeddings are attention-pooled over the H
// steps (learned mean-weighted attention), concatenated with the observation,
// and fed to two scalar trunks in a clipped double-Q arrangement.
class Critic {
 public:
  struct Eval {
    double q1 = 0.0;
    double q2 = 0.0;
    double min() const { return q1 <= q2 ? q1 : q2; }
  };

  struct Workspace {
    std::vector<double> embeds;   // H x embed_dim
    std::vector<double> scores;   // H
    std::vector<double> alphas;   // H
    std::vector<double> pooled;   // embed_dim
    std::vector<double> trunk_in;
    std::vector<std::vector<double>> acts1, acts2;
    std::vector<double> delta, delta_prev, dtrunk_in;
    std::vector<double> dembeds, dpre;
  };

  Critic(CriticConfig cfg, nn::ParamVector params);
  static nn::LayoutPtr make_layout(const CriticConfig& cfg);
  static Critic init(const CriticConfig& cfg, Rng& rng);

  const CriticConfig& config() const { return cfg_; }
  const nn::ParamVector& params() const { return params_; }
  nn::ParamVector& params() { return params_; }
  void set_params(nn::ParamVector p);

  Eval forward(std::span<const double> obs, std::span<const double> chunk,
               Workspace& ws) const;
  double q_min(std::span<const double> obs, std::span<const double> chunk,
               Workspace& ws) const;

  // Gradients of u1*q1 + u2*q2 with respect to parameters (added into
  // grad_accum when non-null) and the action chunk (written to action_grad
  // when non-null, length horizon * kActionDim). Returns the forward Eval.
  Eval backward_accum(std::span<const double> obs, std::span<const double> chunk,
                      double u1, double u2, nn::ParamVector* grad_accum,
                      double* action_grad, Workspace& ws) const;

  // d q_min / d chunk; ties differentiate through head 1.
  Eval action_grad_min(std::span<const double> obs, std::span<const double> chunk,
                       std::vector<double>& grad_out, Workspace& ws) const;

 private:
  CriticConfig cfg_;
  nn::ParamVector params_;
  std::vector<int> trunk_widths_;
  std::size_t trunk1_first_tensor_ = 0;
  std::size_t trunk2_first_tensor_ = 0;
};

// Online / EMA-target twin used for DIVL-style target construction.
struct CriticPair {
  Critic online;
  Critic target;

  static CriticPair init(const CriticConfig& cfg, Rng& rng);
};

// Sum over both heads of (q_i - y)^2; gradients into grad_accum.
double critic_loss_accum(const Critic& critic, std::span<const double> obs,
                         std::span<const double> chunk, double target,
                         nn::ParamVector& grad_accum, Critic::Workspace& ws);

}  // namespace fleetflow::value
