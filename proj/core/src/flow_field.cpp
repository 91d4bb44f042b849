#include "fleetflow/flow_field.hpp"

#include <cstring>

namespace fleetflow::flow {

FlowField::FlowField(int obs_dim, int horizon, nn::DenseNet net)
    : obs_dim_(obs_dim), horizon_(horizon), net_(std::move(net)) {
  if (net_.input_dim() != obs_dim_ + chunk_dim() + 1)
    throw ContractError("FlowField: net input must be obs + chunk + time");
  if (net_.output_dim() != chunk_dim())
    throw ContractError("FlowField: net output must match chunk dimension");
}

FlowField FlowField::init(int obs_dim, int horizon,
                          const std::vector<int>& hidden, Rng& rng) {
  const int chunk = horizon * env::kActionDim;
  std::vector<int> widths;
  widths.push_back(obs_dim + chunk + 1);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(chunk);
  return FlowField(obs_dim, horizon, nn::DenseNet::init(widths, rng));
}

void FlowField::assemble_input(std::span<const double> obs,
                               std::span<const double> chunk_state, double w,
                               Workspace& ws) const {
  if (obs.size() != static_cast<std::size_t>(obs_dim_))
    throw ContractError("FlowField: observation dimension mismatch");
  if (chunk_state.size() != static_cast<std::size_t>(chunk_dim()))
    throw ContractError("FlowField: chunk dimension mismatch");
  ws.input.resize(obs.size() + chunk_state.size() + 1);
  std::memcpy(ws.input.data(), obs.data(), sizeof(double) * obs.size());
  std::memcpy(ws.input.data() + obs.size(), chunk_state.data(),
              sizeof(double) * chunk_state.size());
  ws.input.back() = w;
}

void FlowField::velocity(std::span<const double> obs,
                         std::span<const double> chunk_state, double w,
                         std::vector<double>& out, Workspace& ws) const {
  assemble_input(obs, chunk_state, w, ws);
  net_.forward(ws.input, out, ws.net);
}

double FlowField::backward_accum(std::span<const double> obs,
                                 std::span<const double> chunk_state, double w,
                                 std::span<const double> upstream,
                                 nn::ParamVector* grad_accum, double* chunk_grad,
                                 Workspace& ws) const {
  assemble_input(obs, chunk_state, w, ws);
  double* full_grad = nullptr;
  if (chunk_grad) {
    ws.full_input_grad.resize(ws.input.size());
    full_grad = ws.full_input_grad.data();
  }
  const double loss =
      net_.backward_accum(ws.input, upstream, grad_accum, full_grad, ws.net);
  if (chunk_grad)
    std::memcpy(chunk_grad, full_grad + obs_dim_,
                sizeof(double) * chunk_dim());
  return loss;
}

std::vector<double> fm_interpolate(std::span<const double> data_chunk,
                                   std::span<const double> noise_chunk,
                                   double w) {
  if (data_chunk.size() != noise_chunk.size())
    throw ContractError("fm_interpolate: size mismatch");
  if (!(w >= 0.0 && w <= 1.0))
    throw ContractError("fm_interpolate: w must lie in [0, 1]");
  std::vector<double> out(data_chunk.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - w) * noise_chunk[i] + w * data_chunk[i];
  return out;
}

}  // namespace fleetflow::flow
