#include "fleetflow/param_vector.hpp"

#include <algorithm>
#include <cmath>

#include "fleetflow/errors.hpp"

namespace fleetflow::nn {

std::size_t Layout::add(std::string name, std::size_t rows, std::size_t cols) {
  TensorDesc d;
  d.name = std::move(name);
  d.rows = rows;
  d.cols = cols;
  d.offset = total_;
  total_ += d.size();
  tensors_.push_back(std::move(d));
  return tensors_.size() - 1;
}

bool Layout::operator==(const Layout& other) const {
  if (total_ != other.total_ || tensors_.size() != other.tensors_.size())
    return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    const auto& a = tensors_[i];
    const auto& b = other.tensors_[i];
    if (a.rows != b.rows || a.cols != b.cols || a.offset != b.offset ||
        a.name != b.name)
      return false;
  }
  return true;
}

ParamVector ParamVector::zeros(LayoutPtr layout) {
  ParamVector p;
  p.values.assign(layout->total(), 0.0);
  p.layout = std::move(layout);
  return p;
}

bool ParamVector::same_layout(const ParamVector& other) const {
  if (layout == other.layout) return values.size() == other.values.size();
  return layout && other.layout && *layout == *other.layout &&
         values.size() == other.values.size();
}

bool ParamVector::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

void ParamVector::fill(double v) { std::fill(values.begin(), values.end(), v); }

void check_same_layout(const ParamVector& a, const ParamVector& b,
                       const char* where) {
  if (!a.same_layout(b))
    throw ContractError(std::string(where) + ": parameter layout mismatch");
}

void ema_update(ParamVector& target, const ParamVector& online, double rate) {
  if (rate < 0.0 || rate > 1.0)
    throw ContractError("ema_update: rate must be in [0, 1]");
  check_same_layout(target, online, "ema_update");
  const double keep = 1.0 - rate;
  for (std::size_t i = 0; i < target.values.size(); ++i)
    target.values[i] = keep * target.values[i] + rate * online.values[i];
}

}  // namespace fleetflow::nn
