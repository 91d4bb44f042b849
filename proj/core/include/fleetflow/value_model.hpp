#pragma once

#include "fleetflow/dense_net.hpp"
#include "fleetflow/support.hpp"

namespace fleetflow::value {

// State-value model psi. The default distributional mode predicts logits over
// the categorical support and is trained by cross-entropy against projected
// scalar critic targets. The expectile mode is the scalar-regression ablation
// baseline: a single linear output trained with the asymmetric squared loss.
class ValueModel {
 public:
  enum class Mode { distributional, expectile };

  ValueModel(Mode mode, nn::DenseNet net, ValueSupport support);
  static ValueModel init(Mode mode, int obs_dim, const std::vector<int>& hidden,
                         const ValueSupport& support, Rng& rng);

  Mode mode() const { return mode_; }
  const ValueSupport& support() const { return support_; }
  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& net() { return net_; }

  CategoricalValueDistribution distribution(std::span<const double> obs,
                                            nn::DenseNet::Workspace& ws) const;
  double scalar_value(std::span<const double> obs,
                      nn::DenseNet::Workspace& ws) const;

  // Adds the gradient of this sample's loss into grad_accum and returns the
  // loss. Distributional: NLL of the projected target. Expectile: asymmetric
  // squared loss at level tau.
  double loss_accum(std::span<const double> obs, double target, double tau,
                    nn::ParamVector& grad_accum,
                    nn::DenseNet::Workspace& ws) const;

 private:
  Mode mode_;
  nn::DenseNet net_;
  ValueSupport support_;
};

// Numerically stable softmax (max-subtracted), used by the distributional
// head and by the critic's attention pooling.
void softmax_inplace(std::vector<double>& z);

}  // namespace fleetflow::value
