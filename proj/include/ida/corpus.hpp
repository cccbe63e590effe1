#pragma once

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "ida/caption.hpp"
#include "ida/hash.hpp"
#include "ida/identity.hpp"
#include "ida/png_io.hpp"
#include "ida/renderer.hpp"

namespace ida {

struct CorpusRecord {
  std::string file;
  int identity_id;
  SceneParams scene;
  std::string caption;
};

inline nlohmann::json to_json(const CorpusRecord& r) {
  return nlohmann::json{{"file", r.file},
                        {"identity_id", r.identity_id},
                        {"yaw", r.scene.yaw},
                        {"pitch", r.scene.pitch},
                        {"expression", to_string(r.scene.expression)},
                        {"style", to_string(r.scene.style)},
                        {"context", to_string(r.scene.context)},
                        {"lighting", r.scene.lighting},
                        {"caption", r.caption}};
}

inline CorpusRecord record_from_json(const nlohmann::json& j) {
  CorpusRecord r;
  r.file = j.at("file").get<std::string>();
  r.identity_id = j.at("identity_id").get<int>();
  r.scene.yaw = j.at("yaw").get<double>();
  r.scene.pitch = j.at("pitch").get<double>();
  r.scene.expression = category_from_string<Expression>(j.at("expression").get<std::string>());
  r.scene.style = category_from_string<Style>(j.at("style").get<std::string>());
  r.scene.context = category_from_string<Context>(j.at("context").get<std::string>());
  r.scene.lighting = j.at("lighting").get<double>();
  r.caption = j.at("caption").get<std::string>();
  return r;
}

struct CorpusManifest {
  u64 corpus_seed = 0;
  int num_identities = 0;
  int samples_per_identity = 0;
  std::string root;
  std::vector<CorpusRecord> records;

  const CorpusRecord& sample(int identity_id, int sample_idx) const {
    return records.at(static_cast<std::size_t>(identity_id) * samples_per_identity + sample_idx);
  }
};

// One JSON-lines record per sample. Returns the manifest path.
inline std::string generate_corpus(u64 corpus_seed, int num_identities, int samples_per_identity,
                                   const std::string& out_dir) {
  if (num_identities < 2) throw std::invalid_argument("need at least 2 identities");
  if (samples_per_identity < 1) throw std::invalid_argument("need at least 1 sample per identity");
  std::filesystem::create_directories(out_dir);
  const std::string manifest_path = out_dir + "/manifest.jsonl";
  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write manifest: " + manifest_path);

  for (int id = 0; id < num_identities; ++id) {
    const IdentitySpec spec = sample_identity(corpus_seed, id);
    const std::string noun = class_noun_for(corpus_seed, id);
    for (int k = 0; k < samples_per_identity; ++k) {
      CorpusRecord rec;
      rec.identity_id = id;
      rec.scene = sample_scene(corpus_seed, id, k);
      rec.caption = make_caption(rec.scene, noun);
      rec.file = std::to_string(id) + "_" + std::to_string(k) + ".png";
      save_png(out_dir + "/" + rec.file, render<float>(spec, rec.scene));
      mf << to_json(rec).dump() << "\n";
    }
  }
  mf.close();

  nlohmann::json meta{{"corpus_seed", corpus_seed},
                      {"num_identities", num_identities},
                      {"samples_per_identity", samples_per_identity},
                      {"format_version", 1}};
  std::ofstream(out_dir + "/corpus_meta.json") << meta.dump(2) << "\n";
  return manifest_path;
}

inline CorpusManifest load_corpus(const std::string& dir) {
  CorpusManifest m;
  m.root = dir;
  std::ifstream meta_f(dir + "/corpus_meta.json");
  if (!meta_f) throw std::runtime_error("missing corpus_meta.json in " + dir);
  nlohmann::json meta = nlohmann::json::parse(meta_f);
  if (meta.at("format_version").get<int>() != 1)
    throw std::runtime_error("corpus format version mismatch");
  m.corpus_seed = meta.at("corpus_seed").get<u64>();
  m.num_identities = meta.at("num_identities").get<int>();
  m.samples_per_identity = meta.at("samples_per_identity").get<int>();

  std::ifstream mf(dir + "/manifest.jsonl");
  if (!mf) throw std::runtime_error("missing manifest.jsonl in " + dir);
  std::string line;
  while (std::getline(mf, line)) {
    if (line.empty()) continue;
    m.records.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  if (m.records.size() !=
      static_cast<std::size_t>(m.num_identities) * static_cast<std::size_t>(m.samples_per_identity))
    throw std::runtime_error("manifest row count does not match corpus_meta");
  return m;
}

template <typename S = float>
Image<S> load_corpus_image(const CorpusManifest& m, const CorpusRecord& rec) {
  return load_png<S>(m.root + "/" + rec.file);
}

}  // namespace ida
