#pragma once

#include <map>
#include <string>
#include <vector>

#include "vton/autograd.hpp"
#include "vton/rng.hpp"

namespace vton::nn {

using ag::Var;

/// y = x W + b with x:(N,in), W:(in,out), b:(out).
struct Linear {
  Var w, b;

  static Linear init(int in, int out, Rng& rng, Real w_scale = -1);
  /// All-zero weights and bias (identity-free start for gated layers).
  static Linear zeros(int in, int out);
  Var operator()(const Var& x) const { return ag::add_rowvec(ag::matmul(x, w), b); }
};

/// Conv over (C,H,W) via im2col; weights stored as (out, in*k*k).
struct Conv2d {
  Var w, b;
  int in = 0, out = 0, k = 3, stride = 1, pad = 1;

  static Conv2d init(int in, int out, int k, int stride, int pad, Rng& rng);
  Var operator()(const Var& x) const;
};

struct NamedParam {
  std::string name;
  Var var;
};

using ParamList = std::vector<NamedParam>;

int64_t total_numel(const ParamList& params);
void zero_grads(const ParamList& params);

/// Adam with bias correction. Moments are keyed by parameter name so a
/// subset of parameters (e.g. a finetuning group) can be stepped without
/// disturbing the rest.
class Adam {
 public:
  explicit Adam(Real beta1 = 0.9, Real beta2 = 0.999, Real eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  /// Applies one update with the given learning rate to every listed
  /// parameter that has an accumulated gradient, then clears those grads.
  void step(const ParamList& params, Real lr);

 private:
  struct Moments {
    Tensor m, v;
    int64_t t = 0;
  };
  Real beta1_, beta2_, eps_;
  std::map<std::string, Moments> state_;
};

Tensor randn(std::vector<int> shape, Rng& rng, Real stddev = 1.0);

}  // namespace vton::nn
