#include "vton/positional.hpp"

#include <cmath>
#include <stdexcept>

namespace vton::pos {

std::vector<GridPosition> centered_grid_coords(int h, int w, int base_h, int base_w) {
  if (h < 1 || w < 1 || base_h < 1 || base_w < 1)
    throw std::invalid_argument("centered_grid_coords: dimensions must be >= 1");
  std::vector<GridPosition> out;
  out.reserve(static_cast<size_t>(h) * w);
  const Real row_step = static_cast<Real>(base_h) / h;
  const Real col_step = static_cast<Real>(base_w) / w;
  const Real row_mid = (h - 1) / Real(2);
  const Real col_mid = (w - 1) / Real(2);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      out.push_back({(i - row_mid) * row_step, (j - col_mid) * col_step});
  return out;
}

RopeConfig::RopeConfig(int head_dim_, Real theta_) : head_dim(head_dim_), theta(theta_) {
  if (head_dim % 2 != 0) throw std::invalid_argument("rope: head_dim must be even");
  if (head_dim % 4 != 0)
    throw std::invalid_argument("rope: head_dim must be divisible by 4 (two axes of pairs)");
}

void rope_rotate(std::span<Real> v, const GridPosition& p, const RopeConfig& cfg) {
  if (static_cast<int>(v.size()) != cfg.head_dim)
    throw std::invalid_argument("rope: vector length does not match head_dim");
  const int axis_dim = cfg.head_dim / 2;
  const int pairs = axis_dim / 2;
  for (int axis = 0; axis < 2; ++axis) {
    const Real coord = axis == 0 ? p.row : p.col;
    Real* base = v.data() + axis * axis_dim;
    for (int k = 0; k < pairs; ++k) {
      const Real freq = std::pow(cfg.theta, -Real(2 * k) / axis_dim);
      const Real angle = coord * freq;
      const Real c = std::cos(angle), s = std::sin(angle);
      const Real x0 = base[2 * k], x1 = base[2 * k + 1];
      base[2 * k] = x0 * c - x1 * s;
      base[2 * k + 1] = x0 * s + x1 * c;
    }
  }
}

Tensor rope_rotate_rows(const Tensor& rows, const std::vector<GridPosition>& positions,
                        const RopeConfig& cfg) {
  if (rows.ndim() != 2 || rows.size(1) != cfg.head_dim)
    throw std::invalid_argument("rope_rotate_rows: expected (N, head_dim) matrix");
  if (static_cast<int>(positions.size()) != rows.size(0))
    throw std::invalid_argument("rope_rotate_rows: positions length must match token count");
  Tensor out = rows;
  const int d = cfg.head_dim;
  for (int i = 0; i < out.size(0); ++i)
    rope_rotate(std::span<Real>(out.data() + static_cast<size_t>(i) * d, d), positions[i], cfg);
  return out;
}

std::vector<Real> sinusoidal_embed(Real t, int dim, Real theta) {
  if (dim <= 0 || dim % 2 != 0)
    throw std::invalid_argument("sinusoidal_embed: dim must be positive and even");
  std::vector<Real> out(static_cast<size_t>(dim));
  for (int k = 0; k < dim / 2; ++k) {
    const Real freq = std::pow(theta, -Real(2 * k) / dim);
    out[2 * k] = std::sin(t * freq);
    out[2 * k + 1] = std::cos(t * freq);
  }
  return out;
}

std::vector<Real> sinusoidal_embed_2d(const GridPosition& p, int dim, Real theta) {
  if (dim <= 0 || dim % 4 != 0)
    throw std::invalid_argument("sinusoidal_embed_2d: dim must be divisible by 4");
  std::vector<Real> out;
  out.reserve(static_cast<size_t>(dim));
  auto rows = sinusoidal_embed(p.row, dim / 2, theta);
  auto cols = sinusoidal_embed(p.col, dim / 2, theta);
  out.insert(out.end(), rows.begin(), rows.end());
  out.insert(out.end(), cols.begin(), cols.end());
  return out;
}

}  // namespace vton::pos
