#pragma once

#include <span>
#include <vector>

#include "vton/common.hpp"
#include "vton/tensor.hpp"

namespace vton::pos {

/// Token coordinate in the centralized frame, measured in base-grid cells.
/// Grids of every resolution are centered on the origin and span the same
/// extent, so attention sees consistent geometry across resolutions.
struct GridPosition {
  Real row = 0;
  Real col = 0;
};

/// Row-major coordinates for an h x w token grid mapped into the base_h x
/// base_w frame: token (i,j) sits at
///   ((i - (h-1)/2) * base_h / h, (j - (w-1)/2) * base_w / w).
std::vector<GridPosition> centered_grid_coords(int h, int w, int base_h, int base_w);

/// Rotary embedding over 2-d positions. The head dimension is split in
/// half: the first half of the rotary pairs carries the row axis, the
/// second half the column axis.
struct RopeConfig {
  int head_dim = 32;
  Real theta = 10000.0;

  RopeConfig() = default;
  RopeConfig(int head_dim_, Real theta_ = 10000.0);
};

/// In-place rotation of one head vector by its grid position. Pure and
/// norm-preserving; position (0,0) is the identity.
void rope_rotate(std::span<Real> head_vec, const GridPosition& p, const RopeConfig& cfg);

/// Rotates every row of a (N, head_dim) matrix; positions.size() must be N.
Tensor rope_rotate_rows(const Tensor& rows, const std::vector<GridPosition>& positions,
                        const RopeConfig& cfg);

/// Interleaved sin/cos embedding of a scalar at geometric frequencies:
/// out[2k] = sin(t * theta^(-2k/dim)), out[2k+1] = cos(...). dim must be even.
std::vector<Real> sinusoidal_embed(Real t, int dim, Real theta = 10000.0);

/// Absolute 2-d variant for the positional-encoding ablation: first half of
/// the features embeds the row coordinate, second half the column. dim must
/// be divisible by 4.
std::vector<Real> sinusoidal_embed_2d(const GridPosition& p, int dim, Real theta = 10000.0);

}  // namespace vton::pos
