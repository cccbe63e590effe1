#pragma once

#include <stdexcept>

#include "ida/types.hpp"

namespace ida {

// H*W x 3 pixel matrix, row-major scanline order, values in [0,1].
template <typename S>
struct Image {
  int height = 0;
  int width = 0;
  Mat<S> pixels;  // [H*W, 3]

  Image() = default;
  Image(int h, int w) : height(h), width(w), pixels(Mat<S>::Zero(i64(h) * w, 3)) {}

  S& at(int y, int x, int c) { return pixels(i64(y) * width + x, c); }
  S at(int y, int x, int c) const { return pixels(i64(y) * width + x, c); }

  void clamp01() {
    pixels = pixels.cwiseMax(S(0)).cwiseMin(S(1));
  }

  template <typename T>
  Image<T> cast() const {
    Image<T> out;
    out.height = height;
    out.width = width;
    out.pixels = pixels.template cast<T>();
    return out;
  }
};

using ImageF = Image<float>;
using ImageD = Image<double>;

template <typename S>
void require_shape(const Image<S>& img, int h, int w) {
  if (img.height != h || img.width != w || img.pixels.rows() != i64(h) * w || img.pixels.cols() != 3)
    throw std::invalid_argument("image shape mismatch");
}

}  // namespace ida
