#include "dac/corpus/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dac/corpus/npy.hpp"
#include "dac/corpus/text.hpp"
#include "dac/errors.hpp"

namespace dac::corpus {

std::array<Caption, kRefsPerClip> AudioClip::references(const Vocabulary& vocab) const {
  std::array<Caption, kRefsPerClip> refs;
  for (std::size_t i = 0; i < kRefsPerClip; ++i) {
    refs[i] = normalize_and_tokenize(captions[i], vocab);
  }
  return refs;
}

std::vector<std::string> all_captions(const std::vector<AudioClip>& clips) {
  std::vector<std::string> out;
  out.reserve(clips.size() * kRefsPerClip);
  for (const auto& clip : clips) {
    out.insert(out.end(), clip.captions.begin(), clip.captions.end());
  }
  return out;
}

std::vector<AudioClip> load_manifest(const std::string& path) {
  namespace fs = std::filesystem;
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open manifest " + path);
  }
  const fs::path base = fs::path(path).parent_path();
  std::vector<AudioClip> clips;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(where + "malformed JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("clip_id") || !record["clip_id"].is_string() ||
        !record.contains("features") || !record["features"].is_string() ||
        !record.contains("captions") || !record["captions"].is_array()) {
      throw LoadError(where + "expected {\"clip_id\": str, \"features\": str, \"captions\": [str]}");
    }
    const auto& captions = record["captions"];
    if (captions.size() != kRefsPerClip) {
      throw LoadError(where + "expected " + std::to_string(kRefsPerClip) + " captions, got " +
                      std::to_string(captions.size()));
    }
    AudioClip clip;
    clip.clip_id = record["clip_id"].get<std::string>();
    for (std::size_t i = 0; i < kRefsPerClip; ++i) {
      if (!captions[i].is_string()) {
        throw LoadError(where + "caption " + std::to_string(i) + " is not a string");
      }
      clip.captions[i] = normalize_text(captions[i].get<std::string>());
      if (clip.captions[i].empty()) {
        throw LoadError(where + "caption " + std::to_string(i) + " is empty after normalization");
      }
    }
    const fs::path feature_path = base / record["features"].get<std::string>();
    if (!fs::exists(feature_path)) {
      throw LoadError(where + "missing feature file " + feature_path.string());
    }
    try {
      clip.features = read_npy(feature_path.string());
      validate_features(clip.features);
    } catch (const std::exception& e) {
      throw LoadError(where + e.what());
    }
    clips.push_back(std::move(clip));
  }
  return clips;
}

void write_manifest(const std::string& path, const std::vector<AudioClip>& clips,
                    const std::string& feature_subdir) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(path).parent_path();
  fs::create_directories(base / feature_subdir);
  std::ofstream out(path);
  if (!out) {
    throw LoadError("cannot write manifest " + path);
  }
  for (const auto& clip : clips) {
    const fs::path rel = fs::path(feature_subdir) / (clip.clip_id + ".npy");
    write_npy((base / rel).string(), clip.features);
    nlohmann::json record = {{"clip_id", clip.clip_id},
                             {"features", rel.generic_string()},
                             {"captions", clip.captions}};
    out << record.dump() << '\n';
  }
}

}  // namespace dac::corpus
