#include "dac/cli/experiment_config.hpp"

#include <fstream>

#include "dac/errors.hpp"

namespace dac::cli {
namespace {

template <typename T>
void take(const nlohmann::json& section, const char* key, T& out) {
  if (section.contains(key)) {
    out = section.at(key).get<T>();
  }
}

void known_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& what) {
  if (!j.is_object()) {
    throw ConfigError(what + " must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) {
      known = known || key == k;
    }
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in " + what);
    }
  }
}

nlohmann::json mel_json(const features::MelParams& m) {
  return {{"sample_rate", m.sample_rate},
          {"window", m.window},
          {"hop", m.hop},
          {"n_mels", m.n_mels},
          {"log_floor", m.log_floor}};
}

features::MelParams mel_from_json(const nlohmann::json& j) {
  known_keys(j, {"sample_rate", "window", "hop", "n_mels", "log_floor"}, "mel");
  features::MelParams m;
  take(j, "sample_rate", m.sample_rate);
  take(j, "window", m.window);
  take(j, "hop", m.hop);
  take(j, "n_mels", m.n_mels);
  take(j, "log_floor", m.log_floor);
  return m;
}

}  // namespace

ExperimentConfig ExperimentConfig::paper() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::toy() {
  ExperimentConfig c;
  c.preset = "toy";
  c.generator = model::GeneratorConfig::toy();
  c.discriminator = model::DiscriminatorConfig::toy();
  c.training = training::TrainConfig::toy();
  c.training.augment.max_time_width = 8;  // toy clips are 64 frames long
  return c;
}

ExperimentConfig ExperimentConfig::preset_named(const std::string& name) {
  if (name == "paper") {
    return paper();
  }
  if (name == "toy") {
    return toy();
  }
  throw ConfigError("unknown preset '" + name + "' (expected paper or toy)");
}

void ExperimentConfig::validate() const {
  auto g = generator;
  if (g.vocab_size == 0) {
    g.vocab_size = 5;
  }
  g.validate();
  auto d = model::DiscriminatorConfig::matching(g, discriminator);
  d.validate();
  training.validate();
  try {
    mel.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("mel: ") + e.what());
  }
  if (paths.out_dir.empty()) {
    throw ConfigError("paths.out_dir must not be empty");
  }
  if (generation.num_samples < 1) {
    throw ConfigError("generation.num_samples must be >= 1");
  }
  if (generation.beam_size < 1) {
    throw ConfigError("generation.beam_size must be >= 1");
  }
  if (generation.baseline && generation.num_samples > generation.beam_size) {
    throw ConfigError("baseline generation keeps at most beam_size hypotheses per clip");
  }
  for (std::size_t i = 1; i < metrics.vocab_thresholds.size(); ++i) {
    if (metrics.vocab_thresholds[i] <= metrics.vocab_thresholds[i - 1]) {
      throw ConfigError("metrics.vocab_thresholds must be strictly ascending");
    }
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"preset", preset},
          {"generator", generator.to_json()},
          {"discriminator", discriminator.to_json()},
          {"training", training.to_json()},
          {"mel", mel_json(mel)},
          {"paths",
           {{"train_manifest", paths.train_manifest},
            {"validation_manifest", paths.validation_manifest},
            {"eval_manifest", paths.eval_manifest},
            {"out_dir", paths.out_dir}}},
          {"generation",
           {{"num_samples", generation.num_samples},
            {"baseline", generation.baseline},
            {"beam_size", generation.beam_size}}},
          {"metrics", {{"spice_scores", metrics.spice_scores}, {"vocab_thresholds", metrics.vocab_thresholds}}}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  known_keys(j, {"preset", "generator", "discriminator", "training", "mel", "paths", "generation", "metrics"},
             "experiment config");
  try {
    auto c = preset_named(j.value("preset", std::string("paper")));
    auto merged = c.to_json();
    merged.merge_patch(j);
    c.generator = model::GeneratorConfig::from_json(merged.at("generator"));
    c.discriminator = model::DiscriminatorConfig::from_json(merged.at("discriminator"));
    c.training = training::TrainConfig::from_json(merged.at("training"));
    c.mel = mel_from_json(merged.at("mel"));

    const auto& p = merged.at("paths");
    known_keys(p, {"train_manifest", "validation_manifest", "eval_manifest", "out_dir"}, "paths");
    take(p, "train_manifest", c.paths.train_manifest);
    take(p, "validation_manifest", c.paths.validation_manifest);
    take(p, "eval_manifest", c.paths.eval_manifest);
    take(p, "out_dir", c.paths.out_dir);

    const auto& g = merged.at("generation");
    known_keys(g, {"num_samples", "baseline", "beam_size"}, "generation");
    take(g, "num_samples", c.generation.num_samples);
    take(g, "baseline", c.generation.baseline);
    take(g, "beam_size", c.generation.beam_size);

    const auto& m = merged.at("metrics");
    known_keys(m, {"spice_scores", "vocab_thresholds"}, "metrics");
    take(m, "spice_scores", c.metrics.spice_scores);
    take(m, "vocab_thresholds", c.metrics.vocab_thresholds);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open config " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw LoadError("cannot write config " + path);
  }
  out << to_json().dump(2) << '\n';
}

}  // namespace dac::cli
