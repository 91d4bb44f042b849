#include "fleetflow/sft.hpp"

#include "fleetflow/flow_sampler.hpp"

namespace fleetflow::flow {

double sft_loss_accum(const FlowField& field, std::span<const double> obs,
                      std::span<const double> data_chunk, Rng& rng,
                      nn::ParamVector* grad_accum, FlowField::Workspace& ws) {
  const int d = field.chunk_dim();
  if (data_chunk.size() != static_cast<std::size_t>(d))
    throw ContractError("sft_loss: data chunk dimension mismatch");

  const double w = rng.uniform();
  const std::vector<double> noise = sample_noise_chunk(d, rng);
  const std::vector<double> interp = fm_interpolate(data_chunk, noise, w);

  std::vector<double> pred;
  field.velocity(obs, interp, w, pred, ws);
  double loss = 0.0;
  std::vector<double> upstream(d);
  const double scale = 1.0 / d;
  for (int i = 0; i < d; ++i) {
    const double resid = pred[i] - (data_chunk[i] - noise[i]);
    loss += scale * resid * resid;
    upstream[i] = 2.0 * scale * resid;
  }
  if (grad_accum)
    field.backward_accum(obs, interp, w, upstream, grad_accum, nullptr, ws);
  return loss;
}

}  // namespace fleetflow::flow
