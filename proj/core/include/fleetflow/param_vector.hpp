#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fleetflow::nn {

struct TensorDesc {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;  // 1 for bias vectors
  std::size_t offset = 0;
  std::size_t size() const { return rows * cols; }
};

// Immutable list of (name, shape) descriptors mapping named tensors into one
// flat parameter array.
class Layout {
 public:
  std::size_t add(std::string name, std::size_t rows, std::size_t cols);

  std::size_t total() const { return total_; }
  std::size_t tensor_count() const { return tensors_.size(); }
  const TensorDesc& desc(std::size_t i) const { return tensors_[i]; }
  const std::vector<TensorDesc>& tensors() const { return tensors_; }

  bool operator==(const Layout& other) const;

 private:
  std::vector<TensorDesc> tensors_;
  std::size_t total_ = 0;
};

using LayoutPtr = std::shared_ptr<const Layout>;

// Flat parameter array plus its layout. Plain value type: copies are deep for
// the values and shared for the (immutable) layout.
struct ParamVector {
  LayoutPtr layout;
  std::vector<double> values;

  static ParamVector zeros(LayoutPtr layout);

  double* tensor(std::size_t i) { return values.data() + layout->desc(i).offset; }
  const double* tensor(std::size_t i) const {
    return values.data() + layout->desc(i).offset;
  }
  std::span<double> tensor_span(std::size_t i) {
    return {tensor(i), layout->desc(i).size()};
  }
  std::span<const double> tensor_span(std::size_t i) const {
    return {tensor(i), layout->desc(i).size()};
  }

  bool same_layout(const ParamVector& other) const;
  bool all_finite() const;
  void fill(double v);
};

// Throws ContractError when layouts or sizes differ.
void check_same_layout(const ParamVector& a, const ParamVector& b,
                       const char* where);

// target <- (1 - rate) * target + rate * online, elementwise. rate in [0, 1].
void ema_update(ParamVector& target, const ParamVector& online, double rate);

// Result of a reverse pass: scalar objective value, parameter gradients laid
// out identically to the parameters, and optionally the gradient with respect
// to a designated input block.
struct GradResult {
  double loss = 0.0;
  ParamVector grads;
  std::vector<double> input_grad;
};

}  // namespace fleetflow::nn
