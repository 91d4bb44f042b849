#pragma once

#include "fleetflow/dense_net.hpp"
#include "fleetflow/task.hpp"

namespace fleetflow::flow {

// Conditional vector field over action chunks: maps (observation, noisy chunk
// state, scalar flow time w) to a chunk-sized velocity.
class FlowField {
 public:
  struct Workspace {
    std::vector<double> input;
    std::vector<double> full_input_grad;
    nn::DenseNet::Workspace net;
  };

  FlowField(int obs_dim, int horizon, nn::DenseNet net);
  static FlowField init(int obs_dim, int horizon,
                        const std::vector<int>& hidden, Rng& rng);

  int obs_dim() const { return obs_dim_; }
  int horizon() const { return horizon_; }
  int chunk_dim() const { return horizon_ * env::kActionDim; }
  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& net() { return net_; }

  void velocity(std::span<const double> obs, std::span<const double> chunk_state,
                double w, std::vector<double>& out, Workspace& ws) const;

  // Gradients of <upstream, f(obs, chunk_state, w)>. Parameter gradients add
  // into grad_accum when non-null; the chunk-state gradient (the vector-
  // Jacobian product used by the adjoint solver) is written to chunk_grad
  // when non-null. Returns <upstream, f>.
  double backward_accum(std::span<const double> obs,
                        std::span<const double> chunk_state, double w,
                        std::span<const double> upstream,
                        nn::ParamVector* grad_accum, double* chunk_grad,
                        Workspace& ws) const;

 private:
  void assemble_input(std::span<const double> obs,
                      std::span<const double> chunk_state, double w,
                      Workspace& ws) const;

  int obs_dim_ = 0;
  int horizon_ = 0;
  nn::DenseNet net_;
};

// (1 - w) * noise + w * data, elementwise, w in [0, 1].
std::vector<double> fm_interpolate(std::span<const double> data_chunk,
                                   std::span<const double> noise_chunk,
                                   double w);

}  // namespace fleetflow::flow
