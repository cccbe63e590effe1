#pragma once

#include <string>
#include <vector>

#include "ida/image.hpp"

namespace ida {

// 8-bit RGB PNG, the only image format the pipeline reads or writes.
void write_png_rgb8(const std::string& path, const std::vector<u8>& rgb, int height, int width);
std::vector<u8> read_png_rgb8(const std::string& path, int& height, int& width);

template <typename S>
void save_png(const std::string& path, const Image<S>& img) {
  std::vector<u8> rgb(static_cast<std::size_t>(img.height) * img.width * 3);
  for (i64 i = 0; i < img.pixels.rows(); ++i)
    for (int c = 0; c < 3; ++c) {
      double v = static_cast<double>(img.pixels(i, c));
      v = v < 0 ? 0 : (v > 1 ? 1 : v);
      rgb[static_cast<std::size_t>(i) * 3 + c] = static_cast<u8>(v * 255.0 + 0.5);
    }
  write_png_rgb8(path, rgb, img.height, img.width);
}

template <typename S>
Image<S> load_png(const std::string& path) {
  int h = 0, w = 0;
  std::vector<u8> rgb = read_png_rgb8(path, h, w);
  Image<S> img(h, w);
  for (i64 i = 0; i < img.pixels.rows(); ++i)
    for (int c = 0; c < 3; ++c)
      img.pixels(i, c) = static_cast<S>(rgb[static_cast<std::size_t>(i) * 3 + c] / 255.0);
  return img;
}

}  // namespace ida
