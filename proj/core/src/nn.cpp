#include "vton/nn.hpp"

#include <cmath>

namespace vton::nn {

Tensor randn(std::vector<int> shape, Rng& rng, Real stddev) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = rng.normal() * stddev;
  return t;
}

Linear Linear::init(int in, int out, Rng& rng, Real w_scale) {
  if (w_scale < 0) w_scale = Real(1) / std::sqrt(static_cast<Real>(in));
  Linear l;
  l.w = ag::param(randn({in, out}, rng, w_scale));
  l.b = ag::param(Tensor::zeros({out}));
  return l;
}

Linear Linear::zeros(int in, int out) {
  Linear l;
  l.w = ag::param(Tensor::zeros({in, out}));
  l.b = ag::param(Tensor::zeros({out}));
  return l;
}

Conv2d Conv2d::init(int in, int out, int k, int stride, int pad, Rng& rng) {
  Conv2d c;
  c.in = in;
  c.out = out;
  c.k = k;
  c.stride = stride;
  c.pad = pad;
  const Real w_scale = Real(1) / std::sqrt(static_cast<Real>(in * k * k));
  c.w = ag::param(randn({out, in * k * k}, rng, w_scale));
  c.b = ag::param(Tensor::zeros({out}));
  return c;
}

Var Conv2d::operator()(const Var& x) const {
  const int H = ag::val(x).size(1), W = ag::val(x).size(2);
  const int OH = (H + 2 * pad - k) / stride + 1;
  const int OW = (W + 2 * pad - k) / stride + 1;
  Var col = ag::im2col(x, k, stride, pad);
  Var y = ag::add_colvec(ag::matmul(w, col), b);
  return ag::reshape(y, {out, OH, OW});
}

int64_t total_numel(const ParamList& params) {
  int64_t n = 0;
  for (const auto& p : params) n += p.var->value.numel();
  return n;
}

void zero_grads(const ParamList& params) {
  for (const auto& p : params) p.var->grad = Tensor();
}

void Adam::step(const ParamList& params, Real lr) {
  for (const auto& p : params) {
    ag::Node& node = *p.var;
    if (node.grad.empty()) continue;
    Moments& mom = state_[p.name];
    if (mom.m.empty()) {
      mom.m = Tensor::zeros(node.value.shape());
      mom.v = Tensor::zeros(node.value.shape());
    }
    mom.t += 1;
    const Real bc1 = Real(1) - std::pow(beta1_, static_cast<Real>(mom.t));
    const Real bc2 = Real(1) - std::pow(beta2_, static_cast<Real>(mom.t));
    for (int64_t i = 0; i < node.value.numel(); ++i) {
      const Real g = node.grad[i];
      mom.m[i] = beta1_ * mom.m[i] + (Real(1) - beta1_) * g;
      mom.v[i] = beta2_ * mom.v[i] + (Real(1) - beta2_) * g * g;
      const Real mhat = mom.m[i] / bc1;
      const Real vhat = mom.v[i] / bc2;
      node.value[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
    }
    node.grad = Tensor();
  }
}

}  // namespace vton::nn
