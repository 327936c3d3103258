#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dac/features/log_mel.hpp"
#include "dac/model/config.hpp"
#include "dac/training/config.hpp"

namespace dac::cli {

struct PathsConfig {
  std::string train_manifest;
  std::string validation_manifest;  // optional; enables per-epoch validation CIDEr
  std::string eval_manifest;        // clips captioned by `generate`; defaults to the training manifest
  std::string out_dir = "run";
};

struct GenerationConfig {
  std::int64_t num_samples = 5;
  bool baseline = false;
  std::int64_t beam_size = 5;
};

struct MetricsConfig {
  std::string spice_scores;  // optional JSON {clip_id: spice}
  std::vector<std::size_t> vocab_thresholds{0, 1, 2, 5, 10, 20, 50, 100};
};

/// Everything a run needs. A config file is a JSON object with an optional
/// "preset" ("paper" or "toy") and any subset of the sections below; missing
/// keys take the preset's values and unknown keys are rejected.
struct ExperimentConfig {
  std::string preset = "paper";
  model::GeneratorConfig generator;
  model::DiscriminatorConfig discriminator;
  training::TrainConfig training;
  features::MelParams mel;
  PathsConfig paths;
  GenerationConfig generation;
  MetricsConfig metrics;

  static ExperimentConfig paper();
  static ExperimentConfig toy();
  static ExperimentConfig preset_named(const std::string& name);

  /// generator.vocab_size may still be 0 here; it is filled in from the
  /// vocabulary when a generator is first built.
  void validate() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace dac::cli
