#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ida/identity.hpp"
#include "ida/image.hpp"
#include "ida/renderer.hpp"
#include "ida/rng.hpp"

namespace ida {

struct AugmentParams {
  bool flip = false;
  double rotation_deg = 0.0;   // [-15, 15]
  double hue_shift = 0.0;      // [-0.1, 0.1]
  double brightness = 0.0;     // [-0.1, 0.1]
};

inline AugmentParams draw_augment_params(u64 aug_seed) {
  Rng r(aug_seed, /*stream=*/0xa6);
  AugmentParams p;
  p.flip = r.bernoulli(0.5);
  p.rotation_deg = r.uniform(-15.0, 15.0);
  p.hue_shift = r.uniform(-0.1, 0.1);
  p.brightness = r.uniform(-0.1, 0.1);
  return p;
}

// Identity parameters produce a bit-identical copy; flip alone is an
// involution. Rotation clamps source coords to the border.
template <typename S>
Image<S> augment_with(const Image<S>& img, const AugmentParams& p) {
  const int h = img.height, w = img.width;
  Image<S> out(h, w);

  const bool rotate = p.rotation_deg != 0.0;
  const double a = p.rotation_deg * kPi / 180.0;
  const double ca = std::cos(a), sa = std::sin(a);
  const double cx = 0.5 * (w - 1), cy = 0.5 * (h - 1);

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sxf = p.flip ? (w - 1 - x) : x;
      double syf = y;
      if (rotate) {
        const double rx = sxf - cx, ry = syf - cy;
        sxf = cx + ca * rx + sa * ry;
        syf = cy - sa * rx + ca * ry;
        sxf = std::clamp(sxf, 0.0, double(w - 1));
        syf = std::clamp(syf, 0.0, double(h - 1));
      }
      if (!rotate) {
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(int(syf), int(sxf), c);
        continue;
      }
      const int x0 = static_cast<int>(sxf), y0 = static_cast<int>(syf);
      const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
      const double fx = sxf - x0, fy = syf - y0;
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - fy) * ((1 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c)) +
                         fy * ((1 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c));
        out.at(y, x, c) = static_cast<S>(v);
      }
    }

  if (p.hue_shift != 0.0 || p.brightness != 0.0) {
    for (i64 i = 0; i < out.pixels.rows(); ++i) {
      double r = out.pixels(i, 0), g = out.pixels(i, 1), b = out.pixels(i, 2);
      if (p.hue_shift != 0.0) {
        double hh, ss, vv;
        detail::rgb_to_hsv(r, g, b, hh, ss, vv);
        detail::Rgb c = detail::hsv_to_rgb(hh + p.hue_shift, ss, vv);
        r = c.r; g = c.g; b = c.b;
      }
      out.pixels(i, 0) = static_cast<S>(std::clamp(r + p.brightness, 0.0, 1.0));
      out.pixels(i, 1) = static_cast<S>(std::clamp(g + p.brightness, 0.0, 1.0));
      out.pixels(i, 2) = static_cast<S>(std::clamp(b + p.brightness, 0.0, 1.0));
    }
  }
  return out;
}

template <typename S>
Image<S> augment(const Image<S>& img, u64 aug_seed) {
  return augment_with(img, draw_augment_params(aug_seed));
}

template <typename S = float>
struct ReferenceSet {
  int identity_id = 0;
  std::vector<Image<S>> images;
  int n = 0;             // total reference count N
  int source_count = 0;  // K rendered sources, first in `images`
};

// Renders the K source scenes, then enriches to n images by augmenting
// randomly chosen sources. Sources first, augmentations after.
template <typename S = float>
ReferenceSet<S> build_reference_set(const IdentitySpec& id,
                                    const std::vector<SceneParams>& source_scenes, int n,
                                    u64 seed) {
  const int k = static_cast<int>(source_scenes.size());
  if (k < 1) throw std::invalid_argument("reference set needs at least one source scene");
  if (n < k) throw std::invalid_argument("n must be >= source count");
  ReferenceSet<S> set;
  set.identity_id = id.identity_id;
  set.n = n;
  set.source_count = k;
  set.images.reserve(static_cast<std::size_t>(n));
  for (const auto& scene : source_scenes) set.images.push_back(render<S>(id, scene));
  Rng r(seed, static_cast<u64>(id.identity_id), 0x4ef);
  for (int i = k; i < n; ++i) {
    const auto& src = set.images[r.uniform_int(static_cast<u64>(k))];
    set.images.push_back(augment(src, r.next_u64()));
  }
  return set;
}

}  // namespace ida
