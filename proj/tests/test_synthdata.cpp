#include <doctest.h>

#include <filesystem>
#include <set>

#include "ida/augment.hpp"
#include "ida/corpus.hpp"
#include "ida/identity.hpp"
#include "ida/renderer.hpp"

using namespace ida;

TEST_SUITE("synthdata") {

TEST_CASE("sample_identity is deterministic and in range") {
  IdentitySpec a = sample_identity(0, 0), b = sample_identity(0, 0);
  CHECK(a.params == b.params);

  IdentitySpec c = sample_identity(0, 5);
  CHECK(c.aspect() >= 0.7); CHECK(c.aspect() <= 1.3);
  CHECK(c.hue() >= 0.0); CHECK(c.hue() < 1.0);
  CHECK(c.eye_spacing() >= 0.2); CHECK(c.eye_spacing() <= 0.45);
  CHECK(c.eye_size() >= 0.05); CHECK(c.eye_size() <= 0.15);
  CHECK(c.nose_length() >= 0.05); CHECK(c.nose_length() <= 0.2);
  CHECK(c.mouth_width() >= 0.2); CHECK(c.mouth_width() <= 0.5);
  CHECK(c.brow_thickness() >= 0.01); CHECK(c.brow_thickness() <= 0.05);
  CHECK(c.skin_lightness() >= 0.3); CHECK(c.skin_lightness() <= 0.9);

  CHECK_THROWS(sample_identity(0, -1));
}

TEST_CASE("no identity collisions over the first 1000 ids") {
  // brute-force enumeration oracle
  std::set<std::array<double, 8>> seen;
  for (int id = 0; id < 1000; ++id) seen.insert(sample_identity(0, id).params);
  CHECK(seen.size() == 1000);
}

TEST_CASE("render is pure and bit-identical") {
  IdentitySpec id = sample_identity(3, 1);
  SceneParams s = sample_scene(3, 1, 2);
  ImageF a = render<float>(id, s), b = render<float>(id, s);
  CHECK(a.pixels == b.pixels);
  CHECK(a.pixels.minCoeff() >= 0.0f);
  CHECK(a.pixels.maxCoeff() <= 1.0f);
}

TEST_CASE("yaw mirrors landmark x offsets") {
  IdentitySpec id = sample_identity(0, 7);
  SceneParams sp = canonical_scene(), sm = canonical_scene();
  sp.yaw = 30.0;
  sm.yaw = -30.0;
  FaceLandmarks lp = face_landmarks(id, sp), lm = face_landmarks(id, sm);
  CHECK(lp.dx == doctest::Approx(-lm.dx).epsilon(1e-12));
  CHECK(lp.eye_lx - lp.cx == doctest::Approx(-(lm.eye_rx - lm.cx)).epsilon(1e-9));
  CHECK(lp.dy == lm.dy);
}

TEST_CASE("yaw moves landmarks monotonically") {
  IdentitySpec id = sample_identity(0, 2);
  double prev = -1e9;
  for (double yaw = -45; yaw <= 45; yaw += 5) {
    SceneParams s = canonical_scene();
    s.yaw = yaw;
    double dx = face_landmarks(id, s).dx;
    CHECK(dx > prev);
    prev = dx;
  }
}

TEST_CASE("expression changes only mouth eye brow geometry") {
  IdentitySpec id = sample_identity(0, 4);
  SceneParams a = canonical_scene(), b = canonical_scene();
  b.expression = Expression::kHappy;
  FaceLandmarks la = face_landmarks(id, a), lb = face_landmarks(id, b);
  CHECK(la.cx == lb.cx);
  CHECK(la.ax == lb.ax);
  CHECK(la.nose_y0 == lb.nose_y0);
  CHECK(la.nose_y1 == lb.nose_y1);
  CHECK(la.eye_lx == lb.eye_lx);
  // what must move
  CHECK(la.eye_ry_px != lb.eye_ry_px);
  CHECK(la.brow_y != lb.brow_y);
  CHECK(la.mouth_bend != lb.mouth_bend);
}

TEST_CASE("distinct identities render distinct images") {
  // brute force over 100 pairs
  SceneParams s = canonical_scene();
  for (int i = 0; i < 100; ++i) {
    ImageF a = render<float>(sample_identity(1, 2 * i), s);
    ImageF b = render<float>(sample_identity(1, 2 * i + 1), s);
    CHECK((a.pixels - b.pixels).norm() > 0.0f);
  }
}

TEST_CASE("identity augmentation is exact passthrough") {
  ImageF img = render<float>(sample_identity(0, 1), canonical_scene());
  AugmentParams p;  // no flip, 0 rotation, 0 jitter
  ImageF out = augment_with(img, p);
  CHECK(out.pixels == img.pixels);
}

TEST_CASE("flip alone is an involution") {
  ImageF img = render<float>(sample_identity(0, 1), sample_scene(0, 1, 3));
  AugmentParams p;
  p.flip = true;
  ImageF once = augment_with(img, p);
  CHECK(once.pixels != img.pixels);
  ImageF twice = augment_with(once, p);
  CHECK(twice.pixels == img.pixels);
}

TEST_CASE("augment output stays in range for 1000 seeds") {
  ImageF img = render<float>(sample_identity(0, 9), sample_scene(0, 9, 1));
  for (u64 seed = 0; seed < 1000; ++seed) {
    ImageF out = augment(img, seed);
    CHECK(out.pixels.minCoeff() >= 0.0f);
    CHECK(out.pixels.maxCoeff() <= 1.0f);
  }
}

TEST_CASE("augment is deterministic in its seed") {
  ImageF img = render<float>(sample_identity(0, 3), sample_scene(0, 3, 2));
  CHECK(augment(img, 77).pixels == augment(img, 77).pixels);
}

TEST_CASE("build_reference_set layouts and errors") {
  IdentitySpec id = sample_identity(0, 6);
  std::vector<SceneParams> one = {canonical_scene()};

  // K=1, N=4: one render plus three augmentations of it
  auto set = build_reference_set<float>(id, one, 4, 5);
  CHECK(set.images.size() == 4);
  CHECK(set.source_count == 1);
  CHECK(set.n == 4);
  ImageF src = render<float>(id, one[0]);
  CHECK(set.images[0].pixels == src.pixels);

  // K=4, N=4: four renders, no augmentation
  std::vector<SceneParams> four;
  for (int k = 0; k < 4; ++k) four.push_back(sample_scene(0, 6, k));
  auto set4 = build_reference_set<float>(id, four, 4, 5);
  for (int k = 0; k < 4; ++k)
    CHECK(set4.images[static_cast<std::size_t>(k)].pixels == render<float>(id, four[k]).pixels);

  // deterministic given seed
  auto a = build_reference_set<float>(id, {four[0], four[1]}, 5, 9);
  auto b = build_reference_set<float>(id, {four[0], four[1]}, 5, 9);
  for (std::size_t i = 0; i < a.images.size(); ++i) CHECK(a.images[i].pixels == b.images[i].pixels);

  CHECK_THROWS(build_reference_set<float>(id, four, 3, 0));  // n < K
}

TEST_CASE("corpus generation counts ids and determinism") {
  namespace fs = std::filesystem;
  const std::string dir_a = (fs::temp_directory_path() / "ida_corpus_a").string();
  const std::string dir_b = (fs::temp_directory_path() / "ida_corpus_b").string();
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  generate_corpus(0, 5, 4, dir_a);
  generate_corpus(0, 5, 4, dir_b);

  CorpusManifest m = load_corpus(dir_a);
  CHECK(m.records.size() == 20);
  for (const auto& r : m.records) {
    CHECK(r.identity_id >= 0);
    CHECK(r.identity_id < 5);
    CHECK(fs::exists(dir_a + "/" + r.file));
  }
  // byte-identical manifests across runs
  CHECK(hash_file_hex(dir_a + "/manifest.jsonl") == hash_file_hex(dir_b + "/manifest.jsonl"));
  CHECK(hash_file_hex(dir_a + "/0_0.png") == hash_file_hex(dir_b + "/0_0.png"));

  CHECK_THROWS(generate_corpus(0, 1, 4, dir_a));  // < 2 identities

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

}  // TEST_SUITE
