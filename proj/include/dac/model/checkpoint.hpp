#pragma once

#include <string>

#include <json.hpp>
#include <torch/torch.h>

#include "dac/model/generator.hpp"

namespace dac::model {

inline constexpr std::int64_t kCheckpointVersion = 1;

/// Metadata stored next to the tensors: which network, its full config and
/// free-form extras (e.g. the training phase).
struct CheckpointHeader {
  std::string kind;
  std::int64_t version = 0;
  nlohmann::json config;
  nlohmann::json extra;
};

void save_checkpoint(const std::string& path, const std::string& kind, const nlohmann::json& config,
                     const torch::nn::Module& module, const nlohmann::json& extra = nlohmann::json::object());

/// Throws LoadError on unreadable files, unknown format or version.
CheckpointHeader read_checkpoint_header(const std::string& path);

/// Loads tensors into `module`; throws LoadError if the stored kind differs.
void load_checkpoint_into(const std::string& path, const std::string& kind, torch::nn::Module& module);

void save_generator(const std::string& path, const CaptionGeneratorImpl& generator,
                    const nlohmann::json& extra = nlohmann::json::object());

/// Rebuilds the generator from its stored config. If `expected` is given its
/// architecture must match the stored one; its noise settings, max_len and
/// dropout then replace the stored values.
CaptionGenerator load_generator(const std::string& path, const GeneratorConfig* expected = nullptr);

}  // namespace dac::model
