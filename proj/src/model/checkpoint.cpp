#include "dac/model/checkpoint.hpp"

#include <filesystem>

#include "dac/errors.hpp"

namespace dac::model {
namespace {

constexpr const char* kFormat = "dac-checkpoint";

std::string read_string(torch::serialize::InputArchive& archive, const std::string& key, const std::string& path) {
  c10::IValue value;
  if (!archive.try_read(key, value) || !value.isString()) {
    throw LoadError(path + ": checkpoint lacks '" + key + "'");
  }
  return value.toStringRef();
}

torch::serialize::InputArchive open_archive(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw LoadError("checkpoint not found: " + path);
  }
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path);
  } catch (const c10::Error& e) {
    throw LoadError("cannot read checkpoint " + path + ": " + e.what_without_backtrace());
  }
  return archive;
}

CheckpointHeader parse_header(torch::serialize::InputArchive& archive, const std::string& path) {
  if (read_string(archive, "format", path) != kFormat) {
    throw LoadError(path + " is not a checkpoint of this tool");
  }
  c10::IValue version;
  if (!archive.try_read("version", version) || !version.isInt()) {
    throw LoadError(path + ": checkpoint lacks a version");
  }
  CheckpointHeader header;
  header.version = version.toInt();
  if (header.version != kCheckpointVersion) {
    throw LoadError(path + ": unsupported checkpoint version " + std::to_string(header.version));
  }
  header.kind = read_string(archive, "kind", path);
  header.config = nlohmann::json::parse(read_string(archive, "config", path));
  header.extra = nlohmann::json::parse(read_string(archive, "extra", path));
  return header;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::string& kind, const nlohmann::json& config,
                     const torch::nn::Module& module, const nlohmann::json& extra) {
  torch::serialize::OutputArchive archive;
  archive.write("format", c10::IValue(std::string(kFormat)));
  archive.write("version", c10::IValue(kCheckpointVersion));
  archive.write("kind", c10::IValue(kind));
  archive.write("config", c10::IValue(config.dump()));
  archive.write("extra", c10::IValue(extra.dump()));
  torch::serialize::OutputArchive tensors;
  module.save(tensors);
  archive.write("parameters", tensors);
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  archive.save_to(path);
}

CheckpointHeader read_checkpoint_header(const std::string& path) {
  auto archive = open_archive(path);
  return parse_header(archive, path);
}

void load_checkpoint_into(const std::string& path, const std::string& kind, torch::nn::Module& module) {
  auto archive = open_archive(path);
  const auto header = parse_header(archive, path);
  if (header.kind != kind) {
    throw LoadError(path + " holds a '" + header.kind + "' checkpoint, expected '" + kind + "'");
  }
  torch::serialize::InputArchive tensors;
  try {
    archive.read("parameters", tensors);
    module.load(tensors);
  } catch (const c10::Error& e) {
    throw LoadError(path + ": parameter mismatch: " + e.what_without_backtrace());
  }
}

void save_generator(const std::string& path, const CaptionGeneratorImpl& generator, const nlohmann::json& extra) {
  save_checkpoint(path, "generator", generator.config().to_json(), generator, extra);
}

CaptionGenerator load_generator(const std::string& path, const GeneratorConfig* expected) {
  const auto header = read_checkpoint_header(path);
  if (header.kind != "generator") {
    throw LoadError(path + " holds a '" + header.kind + "' checkpoint, expected 'generator'");
  }
  auto config = GeneratorConfig::from_json(header.config);
  if (expected != nullptr) {
    if (expected->architecture() != config.architecture()) {
      throw LoadError(path + ": generator architecture " + config.architecture().dump() +
                      " does not match the configured " + expected->architecture().dump());
    }
    config.noise_sigma = expected->noise_sigma;
    config.noise_mode = expected->noise_mode;
    config.max_len = expected->max_len;
    config.dropout = expected->dropout;
  }
  // weights come from the checkpoint, not from the external encoder file
  config.pretrained_encoder.clear();
  CaptionGenerator generator(config);
  load_checkpoint_into(path, "generator", *generator);
  return generator;
}

}  // namespace dac::model
