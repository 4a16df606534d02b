#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "vton/tensor.hpp"

namespace vton::prep {

/// Number of body-part categories in the segmentation label space.
inline constexpr int kNumSegCategories = 28;

/// Mid-point threshold used to binarize gray masks; values >= 128 become 255.
inline constexpr int kBinarizeThreshold = 128;

/// Fill value written into masked pixels of an agnostic image ([-1,1] scale).
inline constexpr Real kAgnosticFill = 0.0;

/// H x W grid of part labels in [0, kNumSegCategories).
struct SegmentationMap {
  int height = 0, width = 0;
  std::vector<uint8_t> labels;  // row-major

  SegmentationMap() = default;
  SegmentationMap(int h, int w) : height(h), width(w), labels(static_cast<size_t>(h) * w, 0) {}

  uint8_t& at(int i, int j) { return labels[static_cast<size_t>(i) * width + j]; }
  uint8_t at(int i, int j) const { return labels[static_cast<size_t>(i) * width + j]; }
  /// Throws std::invalid_argument if any label is outside [0, 27].
  void validate() const;
};

/// H x W grid with entries restricted to {0, 255}.
struct BinaryMask {
  int height = 0, width = 0;
  std::vector<uint8_t> values;  // row-major

  BinaryMask() = default;
  BinaryMask(int h, int w) : height(h), width(w), values(static_cast<size_t>(h) * w, 0) {}

  uint8_t& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
  uint8_t at(int i, int j) const { return values[static_cast<size_t>(i) * width + j]; }
  bool operator==(const BinaryMask&) const = default;
};

/// Person image with garment regions replaced by the neutral fill; the mask
/// that produced it travels along.
struct AgnosticImage {
  Tensor pixels;  // (H, W, 3) in [-1, 1]
  BinaryMask mask;
};

/// 255 exactly where the segmentation label is in `garment_labels`, else 0.
BinaryMask build_garment_mask(const SegmentationMap& seg, const std::set<int>& garment_labels);

/// Morphological dilation with a square kernel (odd size, default 3); the
/// neighbourhood is clamped at image borders.
BinaryMask dilate_mask(const BinaryMask& mask, int kernel = 3);

/// Thresholds an (H, W) gray tensor with values in [0, 255] to {0, 255}.
BinaryMask binarize(const Tensor& gray);

/// Replaces masked pixels with the neutral fill; unmasked pixels are copied
/// bit-exactly from the person image.
AgnosticImage make_agnostic(const Tensor& person, const BinaryMask& mask);

}  // namespace vton::prep
