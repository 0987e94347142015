#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cryptopulse/optimizer.hpp"
#include "cryptopulse/rng.hpp"
#include "cryptopulse/types.hpp"

namespace cpulse {

// Handle into one tape's node list. Valid only for the tape that created it.
struct TensorId {
  std::size_t idx = static_cast<std::size_t>(-1);
};

// Reverse-mode autodiff over dense double matrices. Each forward pass records
// its own graph; backward() walks it once in reverse and accumulates into the
// bound Parameters' gradient slots. Every op checks its result for NaN/Inf.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  TensorId input(Matrix v);
  TensorId scalar(double c);
  // Leaf bound to a Parameter; backward() adds the node gradient to p.grad.
  TensorId param(Parameter& p);

  const Matrix& value(TensorId id) const { return nodes_[id.idx].value; }
  const Matrix& grad(TensorId id) const { return nodes_[id.idx].grad; }
  double scalar_value(TensorId id) const;

  TensorId matmul(TensorId a, TensorId b);
  TensorId add(TensorId a, TensorId b);        // same shape
  TensorId sub(TensorId a, TensorId b);
  TensorId mul(TensorId a, TensorId b);        // elementwise, same shape
  TensorId scale(TensorId a, double c);
  TensorId add_rowwise(TensorId mat, TensorId row);   // broadcast 1 x C row
  TensorId add_scalar(TensorId a, TensorId s);        // broadcast 1 x 1
  TensorId mul_scalar(TensorId a, TensorId s);        // broadcast 1 x 1
  TensorId concat_cols(TensorId a, TensorId b);       // concat last axis
  TensorId stack_scalars(const std::vector<TensorId>& ids);  // -> n x 1
  TensorId element(TensorId a, Eigen::Index i, Eigen::Index j);  // -> 1 x 1
  TensorId sum(TensorId a);                            // -> 1 x 1
  TensorId mean_over_axis(TensorId a, int axis);  // 0: 1 x C, 1: R x 1
  TensorId softmax_over_axis(TensorId a, int axis);
  TensorId tanh(TensorId a);
  TensorId sigmoid(TensorId a);
  TensorId relu(TensorId a);
  // x: L x C, kernel: (width*C) x out, bias: 1 x out. Temporal "same" zero
  // padding, so the output keeps L rows.
  TensorId conv1d_same(TensorId x, TensorId kernel, TensorId bias, int width);
  // Inverted dropout: identity in eval mode, survivors scaled by 1/(1-rate).
  TensorId dropout(TensorId a, double rate, RngStream& rng, bool training);
  // Forward cyclic shift along rows: row t of the output is row (t-tau) mod L.
  TensorId roll_rows(TensorId a, Eigen::Index tau);

  void backward(TensorId loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&)> backprop;  // empty for leaves
  };

  TensorId emplace(Matrix value, std::function<void(Tape&)> backprop);
  Matrix& grad_ref(TensorId id) { return nodes_[id.idx].grad; }
  void check_finite(const Matrix& m, const char* op) const;

  std::vector<Node> nodes_;
  std::vector<std::pair<std::size_t, Parameter*>> bindings_;
};

std::string shape_str(const Matrix& m);

}  // namespace cpulse
