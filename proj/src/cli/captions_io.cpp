#include "dac/cli/captions_io.hpp"

#include <fstream>

#include <json.hpp>

#include "dac/errors.hpp"

namespace dac::cli {

void write_captions(const training::GeneratedCaptions& captions, const std::string& path, std::size_t per_clip) {
  if (captions.empty()) {
    throw InputError("no captions to write");
  }
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [clip, texts] : captions) {
    if (texts.size() != per_clip) {
      throw InputError("clip " + clip + " has " + std::to_string(texts.size()) + " captions, expected " +
                       std::to_string(per_clip));
    }
    j[clip] = texts;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write captions to " + path);
  }
  out << j.dump(2) << '\n';
}

training::GeneratedCaptions read_captions(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open captions file " + path);
  }
  try {
    nlohmann::json j;
    in >> j;
    if (!j.is_object()) {
      throw LoadError(path + ": expected an object of clip id -> captions");
    }
    return j.get<training::GeneratedCaptions>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
}

}  // namespace dac::cli
