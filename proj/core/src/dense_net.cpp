#include "fleetflow/dense_net.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "fleetflow/errors.hpp"

namespace fleetflow::nn {

void affine_forward(const double* w, const double* b, const double* x,
                    double* y, int out, int in) {
  for (int r = 0; r < out; ++r) {
    const double* wr = w + static_cast<std::size_t>(r) * in;
    double acc = b ? b[r] : 0.0;
    for (int c = 0; c < in; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

void affine_backward(const double* w, const double* x, const double* dy,
                     double* dw, double* db, double* dx, int out, int in) {
  if (dx) std::memset(dx, 0, sizeof(double) * in);
  for (int r = 0; r < out; ++r) {
    const double g = dy[r];
    const double* wr = w + static_cast<std::size_t>(r) * in;
    if (db) db[r] += g;
    if (dw) {
      double* dwr = dw + static_cast<std::size_t>(r) * in;
      for (int c = 0; c < in; ++c) dwr[c] += g * x[c];
    }
    if (dx)
      for (int c = 0; c < in; ++c) dx[c] += wr[c] * g;
  }
}

namespace {
void check_finite(const std::vector<double>& v, int layer, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw NumericError(std::string("DenseNet: non-finite ") + what +
                         " at layer " + std::to_string(layer));
}
}  // namespace

LayoutPtr DenseNet::make_layout(const std::vector<int>& widths) {
  if (widths.size() < 2)
    throw ContractError("DenseNet: need at least input and output widths");
  auto layout = std::make_shared<Layout>();
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    if (widths[l] <= 0 || widths[l + 1] <= 0)
      throw ContractError("DenseNet: widths must be positive");
    layout->add("w" + std::to_string(l), widths[l + 1], widths[l]);
    layout->add("b" + std::to_string(l), widths[l + 1], 1);
  }
  return layout;
}

DenseNet::DenseNet(std::vector<int> widths, ParamVector params)
    : widths_(std::move(widths)), params_(std::move(params)) {
  auto expected = make_layout(widths_);
  if (!params_.layout || !(*params_.layout == *expected) ||
      params_.values.size() != expected->total())
    throw ContractError("DenseNet: params do not match widths");
}

DenseNet DenseNet::init(const std::vector<int>& widths, Rng& rng) {
  auto layout = make_layout(widths);
  ParamVector p = ParamVector::zeros(layout);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
    auto w = p.tensor_span(2 * l);
    for (double& v : w) v = rng.uniform(-bound, bound);
    auto b = p.tensor_span(2 * l + 1);
    for (double& v : b) v = rng.uniform(-bound, bound);
  }
  return DenseNet(widths, std::move(p));
}

void DenseNet::set_params(ParamVector p) {
  check_same_layout(params_, p, "DenseNet::set_params");
  params_ = std::move(p);
}

void DenseNet::forward(std::span<const double> in, std::vector<double>& out,
                       Workspace& ws) const {
  const std::size_t layers = widths_.size() - 1;
  if (in.size() != static_cast<std::size_t>(widths_.front()))
    throw ContractError("DenseNet::forward: input dimension mismatch");
  ws.acts.resize(widths_.size());
  ws.acts[0].assign(in.begin(), in.end());
  for (std::size_t l = 0; l < layers; ++l) {
    auto& h = ws.acts[l + 1];
    h.resize(widths_[l + 1]);
    affine_forward(params_.tensor(2 * l), params_.tensor(2 * l + 1),
                   ws.acts[l].data(), h.data(), widths_[l + 1], widths_[l]);
    if (l + 1 < layers)
      for (double& v : h) v = std::tanh(v);
    check_finite(h, static_cast<int>(l), "activation");
  }
  out = ws.acts.back();
}

std::vector<double> DenseNet::forward(std::span<const double> in) const {
  Workspace ws;
  std::vector<double> out;
  forward(in, out, ws);
  return out;
}

double DenseNet::backward_accum(std::span<const double> in,
                                std::span<const double> upstream,
                                ParamVector* grad_accum, double* input_grad,
                                Workspace& ws) const {
  const std::size_t layers = widths_.size() - 1;
  if (upstream.size() != static_cast<std::size_t>(widths_.back()))
    throw ContractError("DenseNet::backward: upstream dimension mismatch");
  if (grad_accum)
    check_same_layout(*grad_accum, params_, "DenseNet::backward");

  std::vector<double> out;
  forward(in, out, ws);
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) loss += upstream[i] * out[i];

  // delta holds dLoss/dz for the layer being processed; output is linear.
  ws.delta.assign(upstream.begin(), upstream.end());
  for (std::size_t l = layers; l-- > 0;) {
    const bool want_dx = (l > 0) || (input_grad != nullptr);
    double* dx = nullptr;
    if (want_dx) {
      ws.delta_prev.resize(widths_[l]);
      dx = ws.delta_prev.data();
    }
    affine_backward(params_.tensor(2 * l), ws.acts[l].data(), ws.delta.data(),
                    grad_accum ? grad_accum->tensor(2 * l) : nullptr,
                    grad_accum ? grad_accum->tensor(2 * l + 1) : nullptr, dx,
                    widths_[l + 1], widths_[l]);
    if (l > 0) {
      // Propagate through the tanh of layer l (acts[l] is post-activation).
      const auto& h = ws.acts[l];
      ws.delta.resize(widths_[l]);
      for (int i = 0; i < widths_[l]; ++i)
        ws.delta[i] = ws.delta_prev[i] * (1.0 - h[i] * h[i]);
      for (double v : ws.delta)
        if (!std::isfinite(v))
          throw NumericError("DenseNet: non-finite gradient at layer " +
                             std::to_string(l));
    } else if (input_grad) {
      std::memcpy(input_grad, ws.delta_prev.data(),
                  sizeof(double) * widths_[0]);
    }
  }
  return loss;
}

GradResult DenseNet::backward(std::span<const double> in,
                              std::span<const double> upstream,
                              bool want_input_grad) const {
  GradResult r;
  r.grads = ParamVector::zeros(params_.layout);
  Workspace ws;
  if (want_input_grad) r.input_grad.resize(widths_.front());
  r.loss = backward_accum(in, upstream, &r.grads,
                          want_input_grad ? r.input_grad.data() : nullptr, ws);
  return r;
}

}  // namespace fleetflow::nn
