#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vton/positional.hpp"
#include "vton/tensor.hpp"

namespace vton::ag {

/// Reverse-mode autodiff over Tensor. Graphs are built eagerly by the op
/// functions below and freed when the last Var handle drops. Values are
/// computed immediately; backward() replays the tape once.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backprop;  // pulls node.grad into parents

  Tensor& ensure_grad() {
    if (grad.empty() && value.numel() > 0) grad = Tensor::zeros(value.shape());
    return grad;
  }
};

using Var = std::shared_ptr<Node>;

Var constant(Tensor v);
Var param(Tensor v);  // leaf with requires_grad = true
inline const Tensor& val(const Var& v) { return v->value; }

/// Accumulates gradients of `root` (must be scalar) into every reachable
/// node with requires_grad. Iterative topological order, deterministic.
void backward(const Var& root);

// ---- elementwise ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, Real s);
Var add_scalar(const Var& a, Real s);
Var gelu(const Var& a);
Var silu(const Var& a);
Var clamp(const Var& a, Real lo, Real hi);

// ---- broadcast over a (N, d) matrix ----
Var add_rowvec(const Var& a, const Var& v);  // v: (d) added to every row
Var mul_rowvec(const Var& a, const Var& v);  // v: (d) scales every row
Var add_colvec(const Var& a, const Var& v);  // v: (M) added to every column

// ---- linear algebra on 2-d tensors ----
Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);

// ---- shape ----
Var reshape(const Var& a, std::vector<int> shape);
Var concat_rows(const std::vector<Var>& parts);
Var slice_rows(const Var& a, int r0, int r1);
Var concat_cols(const std::vector<Var>& parts);
Var slice_cols(const Var& a, int c0, int c1);

// ---- reductions ----
Var sum(const Var& a);
Var mean(const Var& a);

// ---- nn primitives ----
/// Row-wise softmax of (N, K); `mask` (optional, K per row or full N x K)
/// holds additive logits (0 keeps, -inf style drops).
Var softmax_rows(const Var& a, const Tensor* additive_mask = nullptr);
/// Row-wise layer norm without affine part; epsilon inside the sqrt.
Var layernorm_rows(const Var& a, Real eps = 1e-6);
/// Row gather from an embedding table (V, d); backward scatter-adds.
Var gather_rows(const Var& table, const std::vector<int>& ids);

// ---- convolution support ----
/// (C,H,W) -> (C*k*k, OH*OW) patch matrix; zero padding `pad`, stride `stride`.
Var im2col(const Var& x, int k, int stride, int pad);
/// (C,H,W) -> (C,2H,2W) nearest-neighbour upsampling.
Var nearest_up2(const Var& x);

// ---- rotary embedding ----
/// Rotates feature pairs of each row of (N, dh) by per-token 2-d positions:
/// first dh/2 features carry the row axis, second half the column axis.
Var rope_rows(const Var& a, const std::vector<pos::GridPosition>& positions,
              const pos::RopeConfig& cfg);

}  // namespace vton::ag
