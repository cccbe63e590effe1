#pragma once

#include <algorithm>
#include <cmath>

#include "ida/identity.hpp"
#include "ida/image.hpp"

namespace ida {

inline constexpr int kImageSize = 32;
inline constexpr double kPi = 3.14159265358979323846;

// Pixel-space geometry of every facial feature for one (identity, scene)
// pair. The renderer draws exactly this; tests assert against it.
struct FaceLandmarks {
  double cx, cy;          // face center
  double ax, ay;          // face ellipse semi-axes
  double dx, dy;          // yaw/pitch feature shift, pixels
  double eye_y;           // eye row (already shifted)
  double eye_lx, eye_rx;  // eye centers (already shifted)
  double eye_rx_px, eye_ry_px;
  double brow_y;          // brow centerline
  double brow_half_len, brow_half_thick;
  double nose_x, nose_y0, nose_y1, nose_half_w;
  double mouth_cx, mouth_cy, mouth_half_w, mouth_bend, mouth_band, mouth_open_ry;
  bool mouth_open;
};

inline FaceLandmarks face_landmarks(const IdentitySpec& id, const SceneParams& scene,
                                    int size = kImageSize) {
  FaceLandmarks lm{};
  const double r = 0.344 * size;  // base face radius, 11px at 32
  const double sa = std::sqrt(id.aspect());
  lm.cx = 0.5 * size;
  lm.cy = 0.5 * size;
  lm.ax = r * sa;
  lm.ay = r / sa;

  // yaw shears features horizontally, pitch shifts them vertically
  lm.dx = 0.35 * std::sin(scene.yaw * kPi / 180.0) * lm.ax;
  lm.dy = -0.40 * std::sin(scene.pitch * kPi / 180.0) * lm.ay;

  const Expression e = scene.expression;
  const double squint = e == Expression::kHappy      ? 0.72
                        : e == Expression::kSad      ? 0.88
                        : e == Expression::kSurprised ? 1.4
                                                      : 1.0;
  const double brow_raise = e == Expression::kHappy      ? -0.03
                            : e == Expression::kSad      ? 0.055
                            : e == Expression::kSurprised ? -0.10
                                                          : 0.0;
  const double bend = e == Expression::kHappy ? 0.16 : e == Expression::kSad ? -0.16 : 0.0;

  lm.eye_y = lm.cy - 0.24 * lm.ay + lm.dy;
  lm.eye_lx = lm.cx - id.eye_spacing() * lm.ax + lm.dx;
  lm.eye_rx = lm.cx + id.eye_spacing() * lm.ax + lm.dx;
  lm.eye_rx_px = id.eye_size() * r * 1.15;
  lm.eye_ry_px = id.eye_size() * r * squint;

  lm.brow_y = lm.eye_y - (0.17 + brow_raise) * lm.ay;
  lm.brow_half_len = (id.eye_size() * 1.3 + 0.05) * lm.ax;
  lm.brow_half_thick = 0.5 * id.brow_thickness() * r * 2.2;

  lm.nose_x = lm.cx + lm.dx;
  lm.nose_y0 = lm.cy - 0.02 * lm.ay + lm.dy;
  lm.nose_y1 = lm.nose_y0 + id.nose_length() * 1.9 * lm.ay;
  lm.nose_half_w = 0.032 * r;

  lm.mouth_cx = lm.cx + lm.dx;
  lm.mouth_cy = lm.cy + 0.47 * lm.ay + lm.dy;
  lm.mouth_half_w = id.mouth_width() * 0.55 * lm.ax;
  // smile curls the line upward (negative y at the ends)
  lm.mouth_bend = -bend * lm.ay;
  lm.mouth_band = 0.055 * r;
  lm.mouth_open = e == Expression::kSurprised;
  lm.mouth_open_ry = 0.12 * lm.ay;
  return lm;
}

namespace detail {

struct Rgb {
  double r, g, b;
};

inline Rgb hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  double c = v * s;
  double hp = h * 6.0;
  double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  double m = v - c;
  return {r + m, g + m, b + m};
}

inline void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  v = mx;
  double d = mx - mn;
  s = mx <= 0 ? 0 : d / mx;
  if (d <= 0) { h = 0; return; }
  if (mx == r) h = std::fmod((g - b) / d + 6.0, 6.0);
  else if (mx == g) h = (b - r) / d + 2.0;
  else h = (r - g) / d + 4.0;
  h /= 6.0;
}

inline Rgb background_color(Context ctx, double px, double py, int size) {
  const double u = px / size, v = py / size;
  switch (ctx) {
    case Context::kPlain:
      return {0.82, 0.82, 0.84};
    case Context::kSnow: {
      Rgb c{0.78 + 0.18 * v, 0.82 + 0.14 * v, 0.92 + 0.08 * v};
      int ix = static_cast<int>(px * 2), iy = static_cast<int>(py * 2);
      if (((ix * 7 + iy * 13) % 29) == 0) c = {1.0, 1.0, 1.0};
      return c;
    }
    case Context::kBeach: {
      if (v < 0.52) return {0.42, 0.68, 0.93};
      if (v < 0.62) return {0.18, 0.48, 0.78};
      return {0.91, 0.81, 0.55};
    }
    case Context::kCity: {
      Rgb c{0.56, 0.58, 0.63};
      int col = static_cast<int>(u * 8);
      double h = 0.35 + 0.55 * (((col * 13 + 5) % 7) / 7.0);
      if (v > 1.0 - h && (col % 2 == 0)) c = {0.33, 0.35, 0.41};
      return c;
    }
  }
  return {0, 0, 0};
}

inline Rgb apply_style(Style style, Rgb c) {
  switch (style) {
    case Style::kPhoto:
      return c;
    case Style::kSketch: {
      double g = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
      double o = 1.0 - 0.85 * (1.0 - g);
      return {o, o, o};
    }
    case Style::kWatercolor: {
      double g = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
      auto mix = [&](double x) { return 0.28 + 0.72 * (0.65 * x + 0.35 * g); };
      return {std::min(1.0, mix(c.r) + 0.04), mix(c.g), mix(c.b)};
    }
    case Style::kNeon: {
      double h, s, v;
      rgb_to_hsv(c.r, c.g, c.b, h, s, v);
      return hsv_to_rgb(h + 0.5, std::min(1.0, s * 1.9 + 0.25), 0.06 + 0.52 * v);
    }
  }
  return c;
}

inline bool in_ellipse(double px, double py, double cx, double cy, double rx, double ry) {
  double u = (px - cx) / rx, v = (py - cy) / ry;
  return u * u + v * v <= 1.0;
}

}  // namespace detail

// Face-free render of the same scene; used as detector negatives.
template <typename S = float>
Image<S> render_background(const SceneParams& scene, int size = kImageSize) {
  Image<S> img(size, size);
  const int ss = 4;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      detail::Rgb acc{0, 0, 0};
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          double px = x + (sx + 0.5) / ss, py = y + (sy + 0.5) / ss;
          detail::Rgb c = detail::background_color(scene.context, px, py, size);
          acc.r += c.r; acc.g += c.g; acc.b += c.b;
        }
      double inv = 1.0 / (ss * ss);
      detail::Rgb c = detail::apply_style(scene.style, {acc.r * inv, acc.g * inv, acc.b * inv});
      img.at(y, x, 0) = static_cast<S>(std::clamp(c.r * scene.lighting, 0.0, 1.0));
      img.at(y, x, 1) = static_cast<S>(std::clamp(c.g * scene.lighting, 0.0, 1.0));
      img.at(y, x, 2) = static_cast<S>(std::clamp(c.b * scene.lighting, 0.0, 1.0));
    }
  return img;
}

// Deterministic 2D face render. Pure function of (identity, scene): 4x4
// supersampling so sub-pixel factors (brow thickness, eye size) still move
// pixel intensities smoothly.
template <typename S = float>
Image<S> render(const IdentitySpec& id, const SceneParams& scene, int size = kImageSize) {
  using detail::Rgb;
  const FaceLandmarks lm = face_landmarks(id, scene, size);

  const Rgb skin = detail::hsv_to_rgb(id.hue(), 0.42, id.skin_lightness());
  const Rgb outline{skin.r * 0.62, skin.g * 0.62, skin.b * 0.62};
  const Rgb eye{0.07, 0.07, 0.1};
  const Rgb brow{skin.r * 0.3, skin.g * 0.3, skin.b * 0.3};
  const Rgb nose{skin.r * 0.55, skin.g * 0.55, skin.b * 0.55};
  const Rgb mouth{0.5, 0.13, 0.16};
  const Rgb mouth_open{0.22, 0.05, 0.07};

  Image<S> img(size, size);
  const int ss = 4;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      Rgb acc{0, 0, 0};
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          const double px = x + (sx + 0.5) / ss, py = y + (sy + 0.5) / ss;
          Rgb c = detail::background_color(scene.context, px, py, size);

          const double fu = (px - lm.cx) / lm.ax, fv = (py - lm.cy) / lm.ay;
          const double fr = fu * fu + fv * fv;
          if (fr <= 1.0) {
            c = fr > 0.90 ? outline : skin;

            if (detail::in_ellipse(px, py, lm.eye_lx, lm.eye_y, lm.eye_rx_px, lm.eye_ry_px) ||
                detail::in_ellipse(px, py, lm.eye_rx, lm.eye_y, lm.eye_rx_px, lm.eye_ry_px)) {
              c = eye;
            } else if ((std::fabs(px - lm.eye_lx) <= lm.brow_half_len ||
                        std::fabs(px - lm.eye_rx) <= lm.brow_half_len) &&
                       std::fabs(py - lm.brow_y) <= lm.brow_half_thick) {
              c = brow;
            } else if (px >= lm.nose_x - lm.nose_half_w && px <= lm.nose_x + lm.nose_half_w &&
                       py >= lm.nose_y0 && py <= lm.nose_y1) {
              c = nose;
            } else if (lm.mouth_open) {
              if (detail::in_ellipse(px, py, lm.mouth_cx, lm.mouth_cy, lm.mouth_half_w,
                                     lm.mouth_open_ry))
                c = mouth_open;
            } else if (std::fabs(px - lm.mouth_cx) <= lm.mouth_half_w) {
              const double t = (px - lm.mouth_cx) / lm.mouth_half_w;
              const double line_y = lm.mouth_cy + lm.mouth_bend * (t * t - 0.5);
              if (std::fabs(py - line_y) <= lm.mouth_band) c = mouth;
            }
          }
          acc.r += c.r; acc.g += c.g; acc.b += c.b;
        }
      const double inv = 1.0 / (ss * ss);
      Rgb c = detail::apply_style(scene.style, {acc.r * inv, acc.g * inv, acc.b * inv});
      img.at(y, x, 0) = static_cast<S>(std::clamp(c.r * scene.lighting, 0.0, 1.0));
      img.at(y, x, 1) = static_cast<S>(std::clamp(c.g * scene.lighting, 0.0, 1.0));
      img.at(y, x, 2) = static_cast<S>(std::clamp(c.b * scene.lighting, 0.0, 1.0));
    }
  return img;
}

}  // namespace ida
