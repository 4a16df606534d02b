#include "vton/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace vton::io {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_png(const std::string& path, int height, int width, int channels,
               const std::vector<uint8_t>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png write failed: " + path);
  }
  png_init_io(png, fp.get());
  const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, width, height, 8, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int i = 0; i < height; ++i)
    rows[i] = const_cast<png_bytep>(bytes.data() + static_cast<size_t>(i) * width * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<uint8_t> read_png(const std::string& path, int expect_channels, int& height,
                              int& width) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open for reading: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png read failed: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  // Normalize whatever we get to 8-bit RGB or gray.
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (expect_channels == 3) {
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
  } else {
    if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
  }
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  std::vector<uint8_t> bytes(static_cast<size_t>(height) * width * expect_channels);
  std::vector<png_bytep> rows(height);
  for (int i = 0; i < height; ++i)
    rows[i] = bytes.data() + static_cast<size_t>(i) * width * expect_channels;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return bytes;
}

}  // namespace

uint8_t real_to_byte(Real v) {
  const Real c = std::clamp(v, Real(-1), Real(1));
  return static_cast<uint8_t>(std::lround((c + 1) / 2 * 255));
}

Real byte_to_real(uint8_t b) { return static_cast<Real>(b) / 255 * 2 - 1; }

void write_png_rgb(const std::string& path, const Tensor& image) {
  if (image.ndim() != 3 || image.size(2) != 3)
    throw ShapeError("write_png_rgb: expected (H,W,3) tensor");
  const int H = image.size(0), W = image.size(1);
  std::vector<uint8_t> bytes(static_cast<size_t>(H) * W * 3);
  for (int64_t i = 0; i < image.numel(); ++i) bytes[i] = real_to_byte(image[i]);
  write_png(path, H, W, 3, bytes);
}

Tensor read_png_rgb(const std::string& path) {
  int H = 0, W = 0;
  auto bytes = read_png(path, 3, H, W);
  Tensor t({H, W, 3});
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = byte_to_real(bytes[i]);
  return t;
}

void write_png_gray(const std::string& path, const GrayImage& image) {
  if (static_cast<size_t>(image.height) * image.width != image.pixels.size())
    throw ShapeError("write_png_gray: pixel buffer does not match dimensions");
  write_png(path, image.height, image.width, 1, image.pixels);
}

GrayImage read_png_gray(const std::string& path) {
  GrayImage img;
  img.pixels = read_png(path, 1, img.height, img.width);
  return img;
}

}  // namespace vton::io
