#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sparserl/tensor.hpp"

namespace sparserl {

enum class Op : std::uint8_t {
  kConstant,
  kParameter,
  kInput,
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kRelu,
  kTanh,
  kSoftplus,
  kExp,
  kLog,
  kSquare,
  kSum,
  kMean,
  kClamp,
  kConcat,
  kGaussSample,
  kMseLoss,
};

using NodeId = std::int32_t;

struct Node {
  Op op = Op::kConstant;
  std::array<NodeId, 3> parent{-1, -1, -1};
  std::uint8_t arity = 0;
  bool trans_a = false;  // matmul: transpose left operand
  bool trans_b = false;  // matmul: transpose right operand
  double lo = 0.0;       // clamp bounds
  double hi = 0.0;
  bool needs_grad = false;
  Tensor val;
  Tensor dot;      // forward tangent; empty means structurally zero
  Tensor adj;      // adjoint d(loss)/d(node); lazily allocated in backward
  Tensor adj_dot;  // adjoint tangent; carries the Hessian-vector product
};

// Eagerly evaluated computation tape. Nodes are appended in topological
// order; reverse-mode sweeps walk the tape backwards. A second
// forward-tangent sweep plus a tangent-carrying reverse sweep yields exact
// Hessian-vector products (forward-over-reverse).
//
// One tape per loss evaluation; tapes are cheap to build and single-threaded.
class Tape {
 public:
  NodeId parameter(Tensor v);
  NodeId input(Tensor v);
  NodeId constant(Tensor v);
  NodeId scalar(double v) { return constant(Tensor::scalar(v)); }

  NodeId matmul(NodeId a, NodeId b, bool trans_a = false, bool trans_b = false);
  // Binary elementwise ops accept equal shapes, a 1-D row vector broadcast
  // against a 2-D left operand, or a scalar on either side.
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId relu(NodeId x);
  NodeId tanh(NodeId x);
  NodeId softplus(NodeId x);
  NodeId exp(NodeId x);
  NodeId log(NodeId x);
  NodeId square(NodeId x);
  NodeId sum(NodeId x);
  NodeId mean(NodeId x);
  NodeId clamp(NodeId x, double lo, double hi);
  NodeId concat(NodeId a, NodeId b);  // 2-D, along columns
  NodeId gauss_sample(NodeId mu, NodeId sigma, NodeId eps);  // mu + sigma*eps
  NodeId mse_loss(NodeId pred, NodeId target);  // mean over all entries

  NodeId scale(NodeId x, double c) { return mul(x, scalar(c)); }
  NodeId add_scalar(NodeId x, double c) { return add(x, scalar(c)); }

  const Tensor& value(NodeId id) const { return nodes_[id].val; }
  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  /// Reverse sweep from a scalar loss; adjoints readable via grad().
  void backward(NodeId loss);

  /// Gradient of the last backward() loss w.r.t. a leaf. Zero tensor if the
  /// leaf is disconnected.
  Tensor grad(NodeId id) const;

  /// Seeds the forward tangent of a parameter node (the v in Hv).
  void set_tangent(NodeId id, Tensor t);

  /// Forward-over-reverse sweep. Requires tangent seeds on parameters.
  /// Afterwards grad() holds gradients and grad_tangent() holds Hv.
  void hvp(NodeId loss);

  Tensor grad_tangent(NodeId id) const;

 private:
  NodeId push(Node n);
  void eval_tangent(NodeId id);
  void backprop(NodeId id, bool with_tangent);
  void run_backward(NodeId loss, bool with_tangent);

  std::vector<Node> nodes_;
};

// C (+)= op(A) * op(B), all row-major 2-D tensors.
void gemm(const Tensor& a, bool trans_a, const Tensor& b, bool trans_b,
          Tensor& c, bool accumulate);

}  // namespace sparserl
