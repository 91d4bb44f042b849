#pragma once

#include "fleetflow/flow_field.hpp"

namespace fleetflow::flow {

// One behavior-cloning sample: the mean-per-dimension squared error between
// the field at a random interpolation point and the straight-line velocity
// (data - noise). Draws w ~ U(0,1) and noise ~ N(0,I) from the given stream;
// gradients add into grad_accum when non-null. Returns the loss.
double sft_loss_accum(const FlowField& field, std::span<const double> obs,
                      std::span<const double> data_chunk, Rng& rng,
                      nn::ParamVector* grad_accum, FlowField::Workspace& ws);

}  // namespace fleetflow::flow
