#include "vton/preprocessing.hpp"

#include <algorithm>
#include <stdexcept>

namespace vton::prep {

void SegmentationMap::validate() const {
  for (uint8_t l : labels)
    if (l >= kNumSegCategories)
      throw std::invalid_argument("segmentation label out of range [0,27]");
}

BinaryMask build_garment_mask(const SegmentationMap& seg, const std::set<int>& garment_labels) {
  for (int l : garment_labels)
    if (l < 0 || l >= kNumSegCategories)
      throw std::invalid_argument("garment label id out of range [0,27]");
  BinaryMask out(seg.height, seg.width);
  for (size_t i = 0; i < seg.labels.size(); ++i)
    out.values[i] = garment_labels.count(seg.labels[i]) ? 255 : 0;
  return out;
}

BinaryMask dilate_mask(const BinaryMask& mask, int kernel) {
  if (kernel < 1 || kernel % 2 == 0)
    throw std::invalid_argument("dilation kernel must be odd and >= 1");
  const int r = kernel / 2;
  const int H = mask.height, W = mask.width;
  // A square kernel dilation separates into a row pass and a column pass.
  BinaryMask rows(H, W);
  for (int i = 0; i < H; ++i)
    for (int j = 0; j < W; ++j) {
      uint8_t v = 0;
      const int lo = std::max(0, j - r), hi = std::min(W - 1, j + r);
      for (int jj = lo; jj <= hi && !v; ++jj) v = mask.at(i, jj) ? 255 : 0;
      rows.at(i, j) = v;
    }
  BinaryMask out(H, W);
  for (int i = 0; i < H; ++i)
    for (int j = 0; j < W; ++j) {
      uint8_t v = 0;
      const int lo = std::max(0, i - r), hi = std::min(H - 1, i + r);
      for (int ii = lo; ii <= hi && !v; ++ii) v = rows.at(ii, j) ? 255 : 0;
      out.at(i, j) = v;
    }
  return out;
}

BinaryMask binarize(const Tensor& gray) {
  if (gray.ndim() != 2) throw ShapeError("binarize: expected (H, W) tensor");
  BinaryMask out(gray.size(0), gray.size(1));
  for (int64_t i = 0; i < gray.numel(); ++i) {
    const Real v = gray[i];
    if (v < 0 || v > 255) throw std::invalid_argument("binarize: value outside [0, 255]");
    out.values[static_cast<size_t>(i)] = v >= kBinarizeThreshold ? 255 : 0;
  }
  return out;
}

AgnosticImage make_agnostic(const Tensor& person, const BinaryMask& mask) {
  if (person.ndim() != 3 || person.size(2) != 3)
    throw std::invalid_argument("make_agnostic: person image must be (H, W, 3)");
  if (person.size(0) != mask.height || person.size(1) != mask.width)
    throw std::invalid_argument("make_agnostic: image and mask dimensions differ");
  AgnosticImage out{person, mask};
  for (int i = 0; i < mask.height; ++i)
    for (int j = 0; j < mask.width; ++j)
      if (mask.at(i, j))
        for (int c = 0; c < 3; ++c) out.pixels.at(i, j, c) = kAgnosticFill;
  return out;
}

}  // namespace vton::prep
