#include "fleetflow/value_model.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::value {

void softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

ValueModel::ValueModel(Mode mode, nn::DenseNet net, ValueSupport support)
    : mode_(mode), net_(std::move(net)), support_(support) {
  support_.validate();
  const int want = mode_ == Mode::distributional ? support_.atoms : 1;
  if (net_.output_dim() != want)
    throw ContractError("ValueModel: head dimension does not match mode");
}

ValueModel ValueModel::init(Mode mode, int obs_dim,
                            const std::vector<int>& hidden,
                            const ValueSupport& support, Rng& rng) {
  std::vector<int> widths;
  widths.push_back(obs_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(mode == Mode::distributional ? support.atoms : 1);
  return ValueModel(mode, nn::DenseNet::init(widths, rng), support);
}

CategoricalValueDistribution ValueModel::distribution(
    std::span<const double> obs, nn::DenseNet::Workspace& ws) const {
  if (mode_ != Mode::distributional)
    throw ContractError("ValueModel::distribution: scalar mode has no distribution");
  CategoricalValueDistribution dist;
  dist.support = support_;
  net_.forward(obs, dist.probs, ws);
  softmax_inplace(dist.probs);
  return dist;
}

double ValueModel::scalar_value(std::span<const double> obs,
                                nn::DenseNet::Workspace& ws) const {
  if (mode_ != Mode::expectile)
    throw ContractError("ValueModel::scalar_value: distributional mode has no scalar head");
  std::vector<double> out;
  net_.forward(obs, out, ws);
  return out[0];
}

double ValueModel::loss_accum(std::span<const double> obs, double target,
                              double tau, nn::ParamVector& grad_accum,
                              nn::DenseNet::Workspace& ws) const {
  if (!std::isfinite(target)) throw NumericError("ValueModel: non-finite target");
  if (mode_ == Mode::distributional) {
    std::vector<double> logits;
    net_.forward(obs, logits, ws);
    std::vector<double> probs = logits;
    softmax_inplace(probs);
    const auto m = c51_project(target, support_);
    double loss = 0.0;
    std::vector<double> upstream(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (m.probs[i] > 0.0)
        loss -= m.probs[i] * std::log(std::max(probs[i], 1e-300));
      // d(-sum m log softmax(z)) / dz = softmax(z) - m
      upstream[i] = probs[i] - m.probs[i];
    }
    net_.backward_accum(obs, upstream, &grad_accum, nullptr, ws);
    return loss;
  }
  // Expectile mode: rho_{tau,2}(target - V).
  std::vector<double> out;
  net_.forward(obs, out, ws);
  const double u = target - out[0];
  const double w = std::abs(tau - (u < 0.0 ? 1.0 : 0.0));
  const double loss = w * u * u;
  const double upstream = -2.0 * w * u;
  const std::vector<double> up{upstream};
  net_.backward_accum(obs, up, &grad_accum, nullptr, ws);
  return loss;
}

}  // namespace fleetflow::value
