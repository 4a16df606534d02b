#pragma once

#include <string>
#include <vector>

#include "vton/nn.hpp"
#include "vton/tensor.hpp"

namespace vton::codec {

struct CodecConfig {
  int downsample = 4;       // f, power of two; one stride-2 stage per factor of 2
  int latent_channels = 4;  // c
  int hidden = 32;

  int stages() const;
  bool operator==(const CodecConfig&) const = default;
};

/// Strided convolutional autoencoder mapping (H,W,3) images in [-1,1] to
/// (c, H/f, W/f) latents. Deterministic: encoding has no sampling branch.
/// A stored per-channel scale normalizes latent standard deviation to 1 for
/// diffusion; decode divides by the same stored factor before the conv stack.
class Codec {
 public:
  static Codec init(const CodecConfig& cfg, uint64_t seed);

  const CodecConfig& config() const { return cfg_; }

  /// (H,W,3) -> (c, H/f, W/f), latent scale applied. Throws ShapeError if
  /// H or W is not divisible by f.
  Tensor encode(const Tensor& image) const;
  /// (c,h,w) -> (f*h, f*w, 3), clamped to [-1,1]; inverts the latent scale.
  Tensor decode(const Tensor& latent) const;

  /// Differentiable raw paths (no latent scale) used by training.
  ag::Var encode_raw(const ag::Var& image_chw) const;
  ag::Var decode_raw(const ag::Var& latent) const;

  const Tensor& latent_scale() const { return latent_scale_; }
  void set_latent_scale(Tensor s);

  nn::ParamList parameters();

  void save(const std::string& path) const;  // path.bin + path.json sidecar
  static Codec load(const std::string& path);

 private:
  CodecConfig cfg_;
  std::vector<nn::Conv2d> enc_stages_;
  nn::Conv2d enc_head_;
  nn::Conv2d dec_in_;
  std::vector<nn::Conv2d> dec_stages_;
  nn::Conv2d dec_out_;
  Tensor latent_scale_;  // (c), defaults to ones
};

/// (H,W,3) <-> (3,H,W) layout helpers.
Tensor hwc_to_chw(const Tensor& image);
Tensor chw_to_hwc(const Tensor& image);

struct CodecTrainOptions {
  int batch_size = 16;
  Real lr = 1e-3;
};

struct CodecTrainResult {
  Codec codec;
  std::vector<Real> losses;  // reconstruction loss per step
};

/// Trains a fresh codec with Adam on plain L2 reconstruction. steps == 0
/// returns the seeded initialization unchanged. Deterministic in (seed,
/// dataset order).
CodecTrainResult train_codec(const std::vector<Tensor>& dataset, int steps, uint64_t seed,
                             const CodecConfig& cfg = {}, const CodecTrainOptions& opts = {});

/// Sets the per-channel latent scale so encoded training latents have unit
/// standard deviation; returns the measured raw stds.
std::vector<Real> calibrate_latent_scale(Codec& codec, const std::vector<Tensor>& dataset);

/// Mean over the dataset of per-image mean squared round-trip error.
Real round_trip_mse(const Codec& codec, const std::vector<Tensor>& dataset);

/// Trailing moving average (window w) of a loss log.
std::vector<Real> moving_average(const std::vector<Real>& xs, int window);

}  // namespace vton::codec
