#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "ida/rng.hpp"

namespace ida {

// Identity factor ranges. Order matches IdentitySpec::params.
namespace idrange {
inline constexpr double kAspect[2] = {0.7, 1.3};
inline constexpr double kHue[2] = {0.0, 1.0};
inline constexpr double kEyeSpacing[2] = {0.2, 0.45};
inline constexpr double kEyeSize[2] = {0.05, 0.15};
inline constexpr double kNoseLength[2] = {0.05, 0.2};
inline constexpr double kMouthWidth[2] = {0.2, 0.5};
inline constexpr double kBrowThickness[2] = {0.01, 0.05};
inline constexpr double kSkinLightness[2] = {0.3, 0.9};
}  // namespace idrange

struct IdentitySpec {
  int identity_id = 0;
  // aspect, hue, eye_spacing, eye_size, nose_length, mouth_width,
  // brow_thickness, skin_lightness
  std::array<double, 8> params{};

  double aspect() const { return params[0]; }
  double hue() const { return params[1]; }
  double eye_spacing() const { return params[2]; }
  double eye_size() const { return params[3]; }
  double nose_length() const { return params[4]; }
  double mouth_width() const { return params[5]; }
  double brow_thickness() const { return params[6]; }
  double skin_lightness() const { return params[7]; }
};

enum class Expression { kNeutral = 0, kHappy, kSad, kSurprised };
enum class Style { kPhoto = 0, kSketch, kWatercolor, kNeon };
enum class Context { kPlain = 0, kSnow, kBeach, kCity };

inline const char* to_string(Expression e) {
  static const char* names[] = {"neutral", "happy", "sad", "surprised"};
  return names[static_cast<int>(e)];
}
inline const char* to_string(Style s) {
  static const char* names[] = {"photo", "sketch", "watercolor", "neon"};
  return names[static_cast<int>(s)];
}
inline const char* to_string(Context c) {
  static const char* names[] = {"plain", "snow", "beach", "city"};
  return names[static_cast<int>(c)];
}

template <typename E>
E category_from_string(const std::string& s);

template <>
inline Expression category_from_string<Expression>(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (s == to_string(static_cast<Expression>(i))) return static_cast<Expression>(i);
  throw std::invalid_argument("unknown expression: " + s);
}
template <>
inline Style category_from_string<Style>(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (s == to_string(static_cast<Style>(i))) return static_cast<Style>(i);
  throw std::invalid_argument("unknown style: " + s);
}
template <>
inline Context category_from_string<Context>(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (s == to_string(static_cast<Context>(i))) return static_cast<Context>(i);
  throw std::invalid_argument("unknown context: " + s);
}

struct SceneParams {
  double yaw = 0.0;    // degrees in [-45, 45]
  double pitch = 0.0;  // degrees in [-20, 20]
  Expression expression = Expression::kNeutral;
  Style style = Style::kPhoto;
  Context context = Context::kPlain;
  double lighting = 1.0;  // [0.5, 1.5]
};

inline SceneParams canonical_scene() { return SceneParams{}; }

// Deterministic identity factors from a counter-based stream keyed on
// (corpus_seed, identity_id).
inline IdentitySpec sample_identity(u64 corpus_seed, int identity_id) {
  if (identity_id < 0) throw std::invalid_argument("identity_id must be >= 0");
  Rng r(corpus_seed, static_cast<u64>(identity_id), /*stream=*/0x1d);
  IdentitySpec id;
  id.identity_id = identity_id;
  id.params[0] = r.uniform(idrange::kAspect[0], idrange::kAspect[1]);
  id.params[1] = r.uniform(idrange::kHue[0], idrange::kHue[1]);
  id.params[2] = r.uniform(idrange::kEyeSpacing[0], idrange::kEyeSpacing[1]);
  id.params[3] = r.uniform(idrange::kEyeSize[0], idrange::kEyeSize[1]);
  id.params[4] = r.uniform(idrange::kNoseLength[0], idrange::kNoseLength[1]);
  id.params[5] = r.uniform(idrange::kMouthWidth[0], idrange::kMouthWidth[1]);
  id.params[6] = r.uniform(idrange::kBrowThickness[0], idrange::kBrowThickness[1]);
  id.params[7] = r.uniform(idrange::kSkinLightness[0], idrange::kSkinLightness[1]);
  return id;
}

// Class noun is a fixed function of the identity, not of the scene.
inline std::string class_noun_for(u64 corpus_seed, int identity_id) {
  static const char* nouns[] = {"man", "woman", "person"};
  Rng r(corpus_seed, static_cast<u64>(identity_id), /*stream=*/0x2e);
  return nouns[r.uniform_int(3)];
}

inline SceneParams sample_scene(u64 corpus_seed, int identity_id, int sample_idx) {
  if (sample_idx == 0) return canonical_scene();  // reference view
  Rng r(corpus_seed, static_cast<u64>(identity_id), 0x100 + static_cast<u64>(sample_idx));
  SceneParams s;
  s.yaw = r.uniform(-45.0, 45.0);
  s.pitch = r.uniform(-20.0, 20.0);
  s.expression = static_cast<Expression>(r.uniform_int(4));
  s.style = static_cast<Style>(r.uniform_int(4));
  s.context = static_cast<Context>(r.uniform_int(4));
  s.lighting = r.uniform(0.5, 1.5);
  return s;
}

}  // namespace ida
