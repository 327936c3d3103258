#include "dac/training/config.hpp"

#include <sstream>

#include "dac/errors.hpp"

namespace dac::training {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string policy_name(ReferencePolicy p) { return p == ReferencePolicy::random ? "random" : "first"; }

ReferencePolicy parse_policy(const std::string& text) {
  if (text == "random") {
    return ReferencePolicy::random;
  }
  if (text == "first") {
    return ReferencePolicy::first;
  }
  throw ConfigError("reference_policy must be 'random' or 'first', got '" + text + "'");
}

nlohmann::json augment_json(const features::AugmentParams& a) {
  return {{"n_time_masks", a.n_time_masks},
          {"max_time_width", a.max_time_width},
          {"n_freq_masks", a.n_freq_masks},
          {"max_freq_width", a.max_freq_width}};
}

features::AugmentParams augment_from_json(const nlohmann::json& j) {
  features::AugmentParams a;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_time_masks") {
      a.n_time_masks = value.get<int>();
    } else if (key == "max_time_width") {
      a.max_time_width = value.get<int>();
    } else if (key == "n_freq_masks") {
      a.n_freq_masks = value.get<int>();
    } else if (key == "max_freq_width") {
      a.max_freq_width = value.get<int>();
    } else {
      throw ConfigError("unknown augment config key '" + key + "'");
    }
  }
  return a;
}

}  // namespace

ComponentMask ComponentMask::parse(std::string_view text) {
  if (text == "all") {
    return {};
  }
  ComponentMask mask{false, false, false};
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "nd") {
      mask.naturalness = true;
    } else if (item == "sd") {
      mask.semantic = true;
    } else if (item == "le") {
      mask.evaluator = true;
    } else {
      throw ConfigError("unknown reward component '" + item + "' (expected nd, sd, le)");
    }
  }
  if (!mask.naturalness && !mask.semantic && !mask.evaluator) {
    throw ConfigError("at least one reward component must be enabled");
  }
  return mask;
}

std::string ComponentMask::to_string() const {
  std::string out;
  auto add = [&out](bool on, const char* name) {
    if (on) {
      out += out.empty() ? "" : ",";
      out += name;
    }
  };
  add(naturalness, "nd");
  add(semantic, "sd");
  add(evaluator, "le");
  return out;
}

TrainConfig TrainConfig::toy() {
  TrainConfig c;
  c.batch_size = 10;
  c.learning_rate = 1e-3;
  c.adv_learning_rate = 3e-4;
  c.disc_learning_rate = 3e-3;
  c.adv_disc_learning_rate = 1e-3;  // 3e-3 here lets D overpower G and collapse it to empty captions
  c.mle_epochs = 60;
  c.baseline_epochs = 80;
  c.disc_pretrain_epochs = 3;
  c.adv_epochs = 50;
  return c;
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0, 1]");
  }
  if (batch_size < 1) {
    throw ConfigError("batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0) || !(adv_learning_rate > 0.0) || !(disc_learning_rate > 0.0) ||
      !(adv_disc_learning_rate > 0.0)) {
    throw ConfigError("learning rates must be positive");
  }
  if (mle_epochs < 0 || baseline_epochs < 0 || disc_pretrain_epochs < 0 || adv_epochs < 0) {
    throw ConfigError("epoch counts must be >= 0");
  }
  if (unpaired_per_clip < 1) {
    throw ConfigError("unpaired_per_clip must be >= 1");
  }
  if (!components.naturalness && !components.semantic && !components.evaluator) {
    throw ConfigError("at least one reward component must be enabled");
  }
  try {
    augment.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("augment: ") + e.what());
  }
}

nlohmann::json TrainConfig::to_json() const {
  return {{"lambda", lambda},
          {"batch_size", batch_size},
          {"learning_rate", learning_rate},
          {"adv_learning_rate", adv_learning_rate},
          {"disc_learning_rate", disc_learning_rate},
          {"adv_disc_learning_rate", adv_disc_learning_rate},
          {"mle_epochs", mle_epochs},
          {"baseline_epochs", baseline_epochs},
          {"disc_pretrain_epochs", disc_pretrain_epochs},
          {"adv_epochs", adv_epochs},
          {"components", components.to_string()},
          {"seed", seed},
          {"reference_policy", policy_name(reference_policy)},
          {"unpaired_per_clip", unpaired_per_clip},
          {"semantic_criterion", discriminators::to_string(semantic_criterion)},
          {"spec_augment", spec_augment},
          {"augment", augment_json(augment)},
          {"select_on_validation", select_on_validation}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("training config must be an object");
  }
  TrainConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "lambda") {
        c.lambda = value.get<double>();
      } else if (key == "batch_size") {
        c.batch_size = value.get<std::int64_t>();
      } else if (key == "learning_rate") {
        c.learning_rate = value.get<double>();
      } else if (key == "adv_learning_rate") {
        c.adv_learning_rate = value.get<double>();
      } else if (key == "disc_learning_rate") {
        c.disc_learning_rate = value.get<double>();
      } else if (key == "adv_disc_learning_rate") {
        c.adv_disc_learning_rate = value.get<double>();
      } else if (key == "mle_epochs") {
        c.mle_epochs = value.get<std::int64_t>();
      } else if (key == "baseline_epochs") {
        c.baseline_epochs = value.get<std::int64_t>();
      } else if (key == "disc_pretrain_epochs") {
        c.disc_pretrain_epochs = value.get<std::int64_t>();
      } else if (key == "adv_epochs") {
        c.adv_epochs = value.get<std::int64_t>();
      } else if (key == "components") {
        c.components = ComponentMask::parse(value.get<std::string>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "reference_policy") {
        c.reference_policy = parse_policy(value.get<std::string>());
      } else if (key == "unpaired_per_clip") {
        c.unpaired_per_clip = value.get<std::int64_t>();
      } else if (key == "semantic_criterion") {
        c.semantic_criterion = discriminators::parse_semantic_criterion(value.get<std::string>());
      } else if (key == "spec_augment") {
        c.spec_augment = value.get<bool>();
      } else if (key == "augment") {
        c.augment = augment_from_json(value);
      } else if (key == "select_on_validation") {
        c.select_on_validation = value.get<bool>();
      } else {
        throw ConfigError("unknown training config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("training config: ") + e.what());
  }
  return c;
}

std::uint64_t phase_seed(std::uint64_t root, std::string_view phase) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : phase) {
    h = (h ^ ch) * 0x100000001b3ULL;
  }
  return splitmix64(root ^ h);
}

}  // namespace dac::training
