#include "vton/autograd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace vton::ag {

namespace {

using EMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<EMat>;
using CMapM = Eigen::Map<const EMat>;

CMapM as_mat(const Tensor& t) {
  if (t.ndim() != 2) throw ShapeError("autograd: expected 2-d tensor");
  return CMapM(t.data(), t.size(0), t.size(1));
}
MapM as_mat(Tensor& t) {
  if (t.ndim() != 2) throw ShapeError("autograd: expected 2-d tensor");
  return MapM(t.data(), t.size(0), t.size(1));
}

bool any_requires(const std::vector<Var>& vs) {
  for (const auto& v : vs)
    if (v->requires_grad) return true;
  return false;
}

Var make_node(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  if (any_requires(parents)) {
    n->requires_grad = true;
    n->parents = std::move(parents);
    n->backprop = std::move(backprop);
  }
  return n;
}

}  // namespace

Var constant(Tensor v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  return n;
}

Var param(Tensor v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->requires_grad = true;
  return n;
}

void backward(const Var& root) {
  if (root->value.numel() != 1) throw ShapeError("backward: root must be scalar");
  // Iterative postorder DFS; reverse postorder is a valid topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  if (root->requires_grad) stack.push_back({root.get(), 0});
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->ensure_grad();
  root->grad[0] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop && !n->grad.empty()) n->backprop(*n);
  }
}

// ---------------------------------------------------------------- elementwise

Var add(const Var& a, const Var& b) {
  check_same_shape(a->value, b->value, "add");
  Tensor out = a->value;
  out += b->value;
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) a->ensure_grad() += n.grad;
    if (b->requires_grad) b->ensure_grad() += n.grad;
  });
}

Var sub(const Var& a, const Var& b) {
  check_same_shape(a->value, b->value, "sub");
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] -= b->value[i];
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) a->ensure_grad() += n.grad;
    if (b->requires_grad) {
      Tensor& g = b->ensure_grad();
      for (int64_t i = 0; i < g.numel(); ++i) g[i] -= n.grad[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  check_same_shape(a->value, b->value, "mul");
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] *= b->value[i];
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      Tensor& g = a->ensure_grad();
      for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * b->value[i];
    }
    if (b->requires_grad) {
      Tensor& g = b->ensure_grad();
      for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * a->value[i];
    }
  });
}

Var scale(const Var& a, Real s) {
  Tensor out = a->value;
  out *= s;
  return make_node(std::move(out), {a}, [a, s](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += s * n.grad[i];
  });
}

Var add_scalar(const Var& a, Real s) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] += s;
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (a->requires_grad) a->ensure_grad() += n.grad;
  });
}

Var gelu(const Var& a) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) {
    const Real x = out[i];
    out[i] = Real(0.5) * x * (Real(1) + std::erf(x * Real(M_SQRT1_2)));
  }
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    constexpr Real inv_sqrt_2pi = Real(0.3989422804014327);
    for (int64_t i = 0; i < g.numel(); ++i) {
      const Real x = a->value[i];
      const Real cdf = Real(0.5) * (Real(1) + std::erf(x * Real(M_SQRT1_2)));
      const Real pdf = inv_sqrt_2pi * std::exp(Real(-0.5) * x * x);
      g[i] += n.grad[i] * (cdf + x * pdf);
    }
  });
}

Var silu(const Var& a) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) {
    const Real x = out[i];
    out[i] = x / (Real(1) + std::exp(-x));
  }
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) {
      const Real x = a->value[i];
      const Real sig = Real(1) / (Real(1) + std::exp(-x));
      g[i] += n.grad[i] * sig * (Real(1) + x * (Real(1) - sig));
    }
  });
}

Var clamp(const Var& a, Real lo, Real hi) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = std::clamp(out[i], lo, hi);
  return make_node(std::move(out), {a}, [a, lo, hi](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) {
      const Real x = a->value[i];
      if (x >= lo && x <= hi) g[i] += n.grad[i];
    }
  });
}

// ----------------------------------------------------------------- broadcast

Var add_rowvec(const Var& a, const Var& v) {
  if (a->value.ndim() != 2 || v->value.numel() != a->value.size(1))
    throw ShapeError("add_rowvec: need (N,d) and (d)");
  Tensor out = a->value;
  const int N = out.size(0), d = out.size(1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < d; ++j) out.at(i, j) += v->value[j];
  return make_node(std::move(out), {a, v}, [a, v](Node& n) {
    const int N = n.value.size(0), d = n.value.size(1);
    if (a->requires_grad) a->ensure_grad() += n.grad;
    if (v->requires_grad) {
      Tensor& g = v->ensure_grad();
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < d; ++j) g[j] += n.grad.at(i, j);
    }
  });
}

Var mul_rowvec(const Var& a, const Var& v) {
  if (a->value.ndim() != 2 || v->value.numel() != a->value.size(1))
    throw ShapeError("mul_rowvec: need (N,d) and (d)");
  Tensor out = a->value;
  const int N = out.size(0), d = out.size(1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < d; ++j) out.at(i, j) *= v->value[j];
  return make_node(std::move(out), {a, v}, [a, v](Node& n) {
    const int N = n.value.size(0), d = n.value.size(1);
    if (a->requires_grad) {
      Tensor& g = a->ensure_grad();
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < d; ++j) g.at(i, j) += n.grad.at(i, j) * v->value[j];
    }
    if (v->requires_grad) {
      Tensor& g = v->ensure_grad();
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < d; ++j) g[j] += n.grad.at(i, j) * a->value.at(i, j);
    }
  });
}

Var add_colvec(const Var& a, const Var& v) {
  if (a->value.ndim() != 2 || v->value.numel() != a->value.size(0))
    throw ShapeError("add_colvec: need (M,N) and (M)");
  Tensor out = a->value;
  const int M = out.size(0), N = out.size(1);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) out.at(i, j) += v->value[i];
  return make_node(std::move(out), {a, v}, [a, v](Node& n) {
    const int M = n.value.size(0), N = n.value.size(1);
    if (a->requires_grad) a->ensure_grad() += n.grad;
    if (v->requires_grad) {
      Tensor& g = v->ensure_grad();
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) g[i] += n.grad.at(i, j);
    }
  });
}

// ------------------------------------------------------------- linear algebra

Var matmul(const Var& a, const Var& b) {
  if (a->value.ndim() != 2 || b->value.ndim() != 2 || a->value.size(1) != b->value.size(0))
    throw ShapeError("matmul: inner dimensions do not match");
  Tensor out({a->value.size(0), b->value.size(1)});
  as_mat(out).noalias() = as_mat(a->value) * as_mat(b->value);
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad)
      as_mat(a->ensure_grad()).noalias() += as_mat(n.grad) * as_mat(b->value).transpose();
    if (b->requires_grad)
      as_mat(b->ensure_grad()).noalias() += as_mat(a->value).transpose() * as_mat(n.grad);
  });
}

Var transpose(const Var& a) {
  if (a->value.ndim() != 2) throw ShapeError("transpose: expected 2-d tensor");
  Tensor out({a->value.size(1), a->value.size(0)});
  as_mat(out) = as_mat(a->value).transpose();
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (a->requires_grad) as_mat(a->ensure_grad()) += as_mat(n.grad).transpose();
  });
}

// -------------------------------------------------------------------- shape

Var reshape(const Var& a, std::vector<int> shape) {
  Tensor out = a->value.reshaped(shape);
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[i];
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: empty input");
  const int d = parts[0]->value.size(1);
  int rows = 0;
  for (const auto& p : parts) {
    if (p->value.ndim() != 2 || p->value.size(1) != d)
      throw ShapeError("concat_rows: column widths differ");
    rows += p->value.size(0);
  }
  Tensor out({rows, d});
  int r = 0;
  for (const auto& p : parts) {
    std::copy(p->value.data(), p->value.data() + p->value.numel(),
              out.data() + static_cast<size_t>(r) * d);
    r += p->value.size(0);
  }
  return make_node(std::move(out), parts, [parts, d](Node& n) {
    int r = 0;
    for (const auto& p : parts) {
      const int pr = p->value.size(0);
      if (p->requires_grad) {
        Tensor& g = p->ensure_grad();
        const Real* src = n.grad.data() + static_cast<size_t>(r) * d;
        for (int64_t i = 0; i < g.numel(); ++i) g[i] += src[i];
      }
      r += pr;
    }
  });
}

Var slice_rows(const Var& a, int r0, int r1) {
  if (a->value.ndim() != 2 || r0 < 0 || r1 > a->value.size(0) || r0 >= r1)
    throw ShapeError("slice_rows: bad range");
  const int d = a->value.size(1);
  Tensor out({r1 - r0, d});
  std::copy(a->value.data() + static_cast<size_t>(r0) * d,
            a->value.data() + static_cast<size_t>(r1) * d, out.data());
  return make_node(std::move(out), {a}, [a, r0, d](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    Real* dst = g.data() + static_cast<size_t>(r0) * d;
    for (int64_t i = 0; i < n.grad.numel(); ++i) dst[i] += n.grad[i];
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: empty input");
  const int N = parts[0]->value.size(0);
  int cols = 0;
  for (const auto& p : parts) {
    if (p->value.ndim() != 2 || p->value.size(0) != N)
      throw ShapeError("concat_cols: row counts differ");
    cols += p->value.size(1);
  }
  Tensor out({N, cols});
  int c = 0;
  for (const auto& p : parts) {
    const int pc = p->value.size(1);
    for (int i = 0; i < N; ++i)
      std::copy(p->value.data() + static_cast<size_t>(i) * pc,
                p->value.data() + static_cast<size_t>(i) * pc + pc, &out.at(i, c));
    c += pc;
  }
  return make_node(std::move(out), parts, [parts, N](Node& n) {
    int c = 0;
    for (const auto& p : parts) {
      const int pc = p->value.size(1);
      if (p->requires_grad) {
        Tensor& g = p->ensure_grad();
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < pc; ++j) g.at(i, j) += n.grad.at(i, c + j);
      }
      c += pc;
    }
  });
}

Var slice_cols(const Var& a, int c0, int c1) {
  if (a->value.ndim() != 2 || c0 < 0 || c1 > a->value.size(1) || c0 >= c1)
    throw ShapeError("slice_cols: bad range");
  const int N = a->value.size(0);
  Tensor out({N, c1 - c0});
  for (int i = 0; i < N; ++i)
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = a->value.at(i, j);
  return make_node(std::move(out), {a}, [a, c0](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    const int N = n.value.size(0), w = n.value.size(1);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < w; ++j) g.at(i, c0 + j) += n.grad.at(i, j);
  });
}

// --------------------------------------------------------------- reductions

Var sum(const Var& a) {
  Real s = 0;
  for (int64_t i = 0; i < a->value.numel(); ++i) s += a->value[i];
  return make_node(Tensor::scalar(s), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[0];
  });
}

Var mean(const Var& a) {
  const Real inv = Real(1) / static_cast<Real>(a->value.numel());
  Real s = 0;
  for (int64_t i = 0; i < a->value.numel(); ++i) s += a->value[i];
  return make_node(Tensor::scalar(s * inv), {a}, [a, inv](Node& n) {
    if (!a->requires_grad) return;
    Tensor& g = a->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[0] * inv;
  });
}

// ------------------------------------------------------------- nn primitives

Var softmax_rows(const Var& a, const Tensor* additive_mask) {
  if (a->value.ndim() != 2) throw ShapeError("softmax_rows: expected 2-d tensor");
  const int N = a->value.size(0), K = a->value.size(1);
  if (additive_mask) {
    const bool per_key = additive_mask->ndim() == 1 && additive_mask->numel() == K;
    const bool full = additive_mask->ndim() == 2 && additive_mask->size(0) == N &&
                      additive_mask->size(1) == K;
    if (!per_key && !full) throw ShapeError("softmax_rows: mask must be (K) or (N,K)");
  }
  Tensor out({N, K});
  for (int i = 0; i < N; ++i) {
    Real mx = -std::numeric_limits<Real>::infinity();
    for (int j = 0; j < K; ++j) {
      Real v = a->value.at(i, j);
      if (additive_mask) v += additive_mask->ndim() == 1 ? (*additive_mask)[j]
                                                         : additive_mask->at(i, j);
      out.at(i, j) = v;
      mx = std::max(mx, v);
    }
    Real z = 0;
    for (int j = 0; j < K; ++j) {
      out.at(i, j) = std::exp(out.at(i, j) - mx);
      z += out.at(i, j);
    }
    const Real inv = Real(1) / z;
    for (int j = 0; j < K; ++j) out.at(i, j) *= inv;
  }
  auto result = make_node(std::move(out), {a}, nullptr);
  if (result->requires_grad) {
    auto self = result.get();
    result->backprop = [a, self](Node& n) {
      if (!a->requires_grad) return;
      Tensor& g = a->ensure_grad();
      const int N = n.value.size(0), K = n.value.size(1);
      for (int i = 0; i < N; ++i) {
        Real dot = 0;
        for (int j = 0; j < K; ++j) dot += n.grad.at(i, j) * self->value.at(i, j);
        for (int j = 0; j < K; ++j)
          g.at(i, j) += self->value.at(i, j) * (n.grad.at(i, j) - dot);
      }
    };
  }
  return result;
}

Var layernorm_rows(const Var& a, Real eps) {
  if (a->value.ndim() != 2) throw ShapeError("layernorm_rows: expected 2-d tensor");
  const int N = a->value.size(0), d = a->value.size(1);
  Tensor out({N, d});
  Tensor inv_std({N});
  for (int i = 0; i < N; ++i) {
    Real mu = 0;
    for (int j = 0; j < d; ++j) mu += a->value.at(i, j);
    mu /= d;
    Real var = 0;
    for (int j = 0; j < d; ++j) {
      const Real c = a->value.at(i, j) - mu;
      var += c * c;
    }
    var /= d;
    const Real is = Real(1) / std::sqrt(var + eps);
    inv_std[i] = is;
    for (int j = 0; j < d; ++j) out.at(i, j) = (a->value.at(i, j) - mu) * is;
  }
  auto result = make_node(std::move(out), {a}, nullptr);
  if (result->requires_grad) {
    auto self = result.get();
    result->backprop = [a, self, inv_std](Node& n) {
      if (!a->requires_grad) return;
      Tensor& g = a->ensure_grad();
      const int N = n.value.size(0), d = n.value.size(1);
      for (int i = 0; i < N; ++i) {
        Real gmean = 0, gdot = 0;
        for (int j = 0; j < d; ++j) {
          gmean += n.grad.at(i, j);
          gdot += n.grad.at(i, j) * self->value.at(i, j);
        }
        gmean /= d;
        gdot /= d;
        for (int j = 0; j < d; ++j)
          g.at(i, j) += inv_std[i] * (n.grad.at(i, j) - gmean - self->value.at(i, j) * gdot);
      }
    };
  }
  return result;
}

Var gather_rows(const Var& table, const std::vector<int>& ids) {
  if (table->value.ndim() != 2) throw ShapeError("gather_rows: table must be 2-d");
  const int V = table->value.size(0), d = table->value.size(1);
  Tensor out({static_cast<int>(ids.size()), d});
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= V) throw std::invalid_argument("gather_rows: id out of range");
    std::copy(&table->value.at(ids[i], 0), &table->value.at(ids[i], 0) + d, &out.at(i, 0));
  }
  return make_node(std::move(out), {table}, [table, ids, d](Node& n) {
    if (!table->requires_grad) return;
    Tensor& g = table->ensure_grad();
    for (size_t i = 0; i < ids.size(); ++i)
      for (int j = 0; j < d; ++j) g.at(ids[i], j) += n.grad.at(static_cast<int>(i), j);
  });
}

// -------------------------------------------------------------- convolution

Var im2col(const Var& x, int k, int stride, int pad) {
  if (x->value.ndim() != 3) throw ShapeError("im2col: expected (C,H,W)");
  const int C = x->value.size(0), H = x->value.size(1), W = x->value.size(2);
  const int OH = (H + 2 * pad - k) / stride + 1;
  const int OW = (W + 2 * pad - k) / stride + 1;
  if (OH <= 0 || OW <= 0) throw ShapeError("im2col: kernel larger than padded input");
  Tensor out({C * k * k, OH * OW});
  for (int c = 0; c < C; ++c)
    for (int ki = 0; ki < k; ++ki)
      for (int kj = 0; kj < k; ++kj) {
        const int row = (c * k + ki) * k + kj;
        for (int oi = 0; oi < OH; ++oi)
          for (int oj = 0; oj < OW; ++oj) {
            const int ii = oi * stride - pad + ki;
            const int jj = oj * stride - pad + kj;
            out.at(row, oi * OW + oj) =
                (ii >= 0 && ii < H && jj >= 0 && jj < W) ? x->value.at(c, ii, jj) : Real(0);
          }
      }
  return make_node(std::move(out), {x}, [x, k, stride, pad, C, H, W, OH, OW](Node& n) {
    if (!x->requires_grad) return;
    Tensor& g = x->ensure_grad();
    for (int c = 0; c < C; ++c)
      for (int ki = 0; ki < k; ++ki)
        for (int kj = 0; kj < k; ++kj) {
          const int row = (c * k + ki) * k + kj;
          for (int oi = 0; oi < OH; ++oi)
            for (int oj = 0; oj < OW; ++oj) {
              const int ii = oi * stride - pad + ki;
              const int jj = oj * stride - pad + kj;
              if (ii >= 0 && ii < H && jj >= 0 && jj < W)
                g.at(c, ii, jj) += n.grad.at(row, oi * OW + oj);
            }
        }
  });
}

Var nearest_up2(const Var& x) {
  if (x->value.ndim() != 3) throw ShapeError("nearest_up2: expected (C,H,W)");
  const int C = x->value.size(0), H = x->value.size(1), W = x->value.size(2);
  Tensor out({C, 2 * H, 2 * W});
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < W; ++j) {
        const Real v = x->value.at(c, i, j);
        out.at(c, 2 * i, 2 * j) = v;
        out.at(c, 2 * i, 2 * j + 1) = v;
        out.at(c, 2 * i + 1, 2 * j) = v;
        out.at(c, 2 * i + 1, 2 * j + 1) = v;
      }
  return make_node(std::move(out), {x}, [x, C, H, W](Node& n) {
    if (!x->requires_grad) return;
    Tensor& g = x->ensure_grad();
    for (int c = 0; c < C; ++c)
      for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j)
          g.at(c, i, j) += n.grad.at(c, 2 * i, 2 * j) + n.grad.at(c, 2 * i, 2 * j + 1) +
                           n.grad.at(c, 2 * i + 1, 2 * j) + n.grad.at(c, 2 * i + 1, 2 * j + 1);
  });
}

// ------------------------------------------------------------------- rotary

Var rope_rows(const Var& a, const std::vector<pos::GridPosition>& positions,
              const pos::RopeConfig& cfg) {
  Tensor out = pos::rope_rotate_rows(a->value, positions, cfg);
  return make_node(std::move(out), {a}, [a, positions, cfg](Node& n) {
    if (!a->requires_grad) return;
    // Rotations are orthogonal: the adjoint rotates by the negated angles.
    std::vector<pos::GridPosition> neg(positions.size());
    for (size_t i = 0; i < positions.size(); ++i)
      neg[i] = {-positions[i].row, -positions[i].col};
    Tensor gin = pos::rope_rotate_rows(n.grad, neg, cfg);
    a->ensure_grad() += gin;
  });
}

}  // namespace vton::ag
