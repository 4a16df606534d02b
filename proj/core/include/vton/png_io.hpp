#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vton/tensor.hpp"

namespace vton::io {

/// 8-bit grayscale plane; used for masks ({0,255}) and label maps.
struct GrayImage {
  int height = 0, width = 0;
  std::vector<uint8_t> pixels;  // row-major H*W
};

/// RGB images are tensors of shape (H, W, 3) with values in [-1, 1];
/// encoding maps linearly onto 8-bit channels.
void write_png_rgb(const std::string& path, const Tensor& image);
Tensor read_png_rgb(const std::string& path);

void write_png_gray(const std::string& path, const GrayImage& image);
GrayImage read_png_gray(const std::string& path);

uint8_t real_to_byte(Real v);
Real byte_to_real(uint8_t b);

}  // namespace vton::io
