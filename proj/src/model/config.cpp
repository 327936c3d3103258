#include "dac/model/config.hpp"

#include "dac/errors.hpp"

namespace dac::model {
namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

void check_known_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) {
    throw ConfigError(std::string(what) + " config must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) {
      known = known || key == k;
    }
    if (!known) {
      throw ConfigError(std::string("unknown ") + what + " config key '" + key + "'");
    }
  }
}

}  // namespace

std::string to_string(NoiseMode mode) { return mode == NoiseMode::per_step ? "per-step" : "fixed"; }

NoiseMode parse_noise_mode(const std::string& text) {
  if (text == "per-step" || text == "per_step") {
    return NoiseMode::per_step;
  }
  if (text == "fixed") {
    return NoiseMode::fixed;
  }
  throw ConfigError("noise mode must be 'per-step' or 'fixed', got '" + text + "'");
}

GeneratorConfig GeneratorConfig::toy() {
  GeneratorConfig c;
  c.encoder_channels = {8, 16, 32, 32};
  c.d_model = 64;
  c.n_heads = 4;
  c.n_layers = 2;
  c.ff_dim = 128;
  c.dropout = 0.0;
  c.max_len = 12;  // longest toy caption is 9 words
  return c;
}

void GeneratorConfig::validate() const {
  for (auto ch : encoder_channels) {
    if (ch <= 0) {
      throw ConfigError("encoder channels must be positive");
    }
  }
  if (d_model <= 0 || n_heads <= 0 || d_model % n_heads != 0) {
    throw ConfigError("d_model must be a positive multiple of n_heads");
  }
  if (n_layers <= 0 || ff_dim <= 0) {
    throw ConfigError("decoder layers and ff width must be positive");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("dropout must be in [0, 1)");
  }
  if (noise_dim < 0) {
    throw ConfigError("noise_dim must be non-negative");
  }
  if (!(noise_sigma >= 0.0)) {
    throw ConfigError("noise_sigma must be >= 0");
  }
  if (max_len < 2) {
    throw ConfigError("max_len must be >= 2");
  }
  if (vocab_size <= 4) {
    throw ConfigError("vocab_size must exceed the four special tokens");
  }
}

nlohmann::json GeneratorConfig::to_json() const {
  return {{"encoder_channels", encoder_channels},
          {"d_model", d_model},
          {"n_heads", n_heads},
          {"n_layers", n_layers},
          {"ff_dim", ff_dim},
          {"dropout", dropout},
          {"noise_dim", noise_dim},
          {"noise_sigma", noise_sigma},
          {"noise_mode", to_string(noise_mode)},
          {"max_len", max_len},
          {"vocab_size", vocab_size},
          {"pretrained_encoder", pretrained_encoder}};
}

GeneratorConfig GeneratorConfig::from_json(const nlohmann::json& j) {
  check_known_keys(j,
                   {"encoder_channels", "d_model", "n_heads", "n_layers", "ff_dim", "dropout", "noise_dim",
                    "noise_sigma", "noise_mode", "max_len", "vocab_size", "pretrained_encoder"},
                   "generator");
  GeneratorConfig c;
  try {
    read_if(j, "encoder_channels", c.encoder_channels);
    read_if(j, "d_model", c.d_model);
    read_if(j, "n_heads", c.n_heads);
    read_if(j, "n_layers", c.n_layers);
    read_if(j, "ff_dim", c.ff_dim);
    read_if(j, "dropout", c.dropout);
    read_if(j, "noise_dim", c.noise_dim);
    read_if(j, "noise_sigma", c.noise_sigma);
    if (j.contains("noise_mode")) {
      c.noise_mode = parse_noise_mode(j.at("noise_mode").get<std::string>());
    }
    read_if(j, "max_len", c.max_len);
    read_if(j, "vocab_size", c.vocab_size);
    read_if(j, "pretrained_encoder", c.pretrained_encoder);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  return c;
}

nlohmann::json GeneratorConfig::architecture() const {
  return {{"encoder_channels", encoder_channels}, {"d_model", d_model},     {"n_heads", n_heads},
          {"n_layers", n_layers},                 {"ff_dim", ff_dim},       {"noise_dim", noise_dim},
          {"vocab_size", vocab_size}};
}

DiscriminatorConfig DiscriminatorConfig::toy() {
  DiscriminatorConfig c;
  c.embed_dim = 64;
  c.hidden_dim = 64;
  c.shared_dim = 64;
  c.encoder_channels = GeneratorConfig::toy().encoder_channels;
  c.audio_dim = GeneratorConfig::toy().d_model;
  return c;
}

DiscriminatorConfig DiscriminatorConfig::matching(const GeneratorConfig& generator,
                                                  const DiscriminatorConfig& widths) {
  DiscriminatorConfig c = widths;
  c.vocab_size = generator.vocab_size;
  c.encoder_channels = generator.encoder_channels;
  c.audio_dim = generator.d_model;
  return c;
}

void DiscriminatorConfig::validate() const {
  if (vocab_size <= 4) {
    throw ConfigError("discriminator vocab_size must exceed the four special tokens");
  }
  if (embed_dim <= 0 || hidden_dim <= 0 || shared_dim <= 0 || audio_dim <= 0) {
    throw ConfigError("discriminator widths must be positive");
  }
  for (auto ch : encoder_channels) {
    if (ch <= 0) {
      throw ConfigError("encoder channels must be positive");
    }
  }
}

nlohmann::json DiscriminatorConfig::to_json() const {
  return {{"vocab_size", vocab_size}, {"embed_dim", embed_dim},
          {"hidden_dim", hidden_dim}, {"shared_dim", shared_dim},
          {"encoder_channels", encoder_channels}, {"audio_dim", audio_dim}};
}

DiscriminatorConfig DiscriminatorConfig::from_json(const nlohmann::json& j) {
  check_known_keys(j, {"vocab_size", "embed_dim", "hidden_dim", "shared_dim", "encoder_channels", "audio_dim"},
                   "discriminator");
  DiscriminatorConfig c;
  try {
    read_if(j, "vocab_size", c.vocab_size);
    read_if(j, "embed_dim", c.embed_dim);
    read_if(j, "hidden_dim", c.hidden_dim);
    read_if(j, "shared_dim", c.shared_dim);
    read_if(j, "encoder_channels", c.encoder_channels);
    read_if(j, "audio_dim", c.audio_dim);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("discriminator config: ") + e.what());
  }
  return c;
}

}  // namespace dac::model
