#pragma once

#include <span>
#include <vector>

#include "fleetflow/param_vector.hpp"
#include "fleetflow/rng.hpp"

namespace fleetflow::nn {

// Fully connected multilayer map with tanh hidden activations and a linear
// output layer. Parameters live in a flat ParamVector (per layer: row-major
// weight matrix then bias).
class DenseNet {
 public:
  // Scratch buffers reused across calls; one per thread.
  struct Workspace {
    std::vector<std::vector<double>> acts;  // acts[l] = activation of layer l
    std::vector<double> delta, delta_prev;
  };

  DenseNet() = default;
  DenseNet(std::vector<int> widths, ParamVector params);

  static LayoutPtr make_layout(const std::vector<int>& widths);

  // Per-layer uniform init scaled by 1/sqrt(fan_in).
  static DenseNet init(const std::vector<int>& widths, Rng& rng);

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  const ParamVector& params() const { return params_; }
  ParamVector& params() { return params_; }
  void set_params(ParamVector p);

  // out = f(in). Throws ContractError on dimension mismatch, NumericError
  // (naming the layer) on non-finite intermediates.
  void forward(std::span<const double> in, std::vector<double>& out,
               Workspace& ws) const;
  std::vector<double> forward(std::span<const double> in) const;

  // Gradients of <upstream, f(in)> with respect to parameters and, if
  // requested, the input. Adds into *grad_accum when non-null (a pure
  // vector-Jacobian product passes nullptr and skips the parameter work);
  // input_grad (when non-null) is overwritten and must have input_dim()
  // elements. Returns <upstream, f(in)>.
  double backward_accum(std::span<const double> in,
                        std::span<const double> upstream,
                        ParamVector* grad_accum, double* input_grad,
                        Workspace& ws) const;
  GradResult backward(std::span<const double> in,
                      std::span<const double> upstream,
                      bool want_input_grad) const;

 private:
  std::vector<int> widths_;
  ParamVector params_;
};

// y = W x + b, W row-major out x in.
void affine_forward(const double* w, const double* b, const double* x,
                    double* y, int out, int in);
// Given dy: dW += dy x^T, db += dy, dx = W^T dy. Any of dw/db/dx may be null
// to skip that output.
void affine_backward(const double* w, const double* x, const double* dy,
                     double* dw, double* db, double* dx, int out, int in);

}  // namespace fleetflow::nn
