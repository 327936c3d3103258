#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace dac::model {

enum class NoiseMode {
  per_step,  // fresh z_t for every decoding step
  fixed,     // one z drawn per caption and reused at every step
};

std::string to_string(NoiseMode mode);
NoiseMode parse_noise_mode(const std::string& text);

/// CNN encoder (4 blocks x 2 conv layers, BN + ReLU, 2x2 max-pool per block,
/// mean over frequency, 2-layer MLP) feeding a Transformer decoder whose
/// cross-attention reads audio features concatenated with noise.
struct GeneratorConfig {
  std::array<std::int64_t, 4> encoder_channels{64, 128, 256, 512};
  std::int64_t d_model = 256;
  std::int64_t n_heads = 4;
  std::int64_t n_layers = 2;
  std::int64_t ff_dim = 1024;
  double dropout = 0.1;
  std::int64_t noise_dim = 64;
  double noise_sigma = 1.0;
  NoiseMode noise_mode = NoiseMode::per_step;
  std::int64_t max_len = 30;  // total tokens including <sos>
  std::int64_t vocab_size = 0;
  std::string pretrained_encoder;  // optional PANNs-layout weight file

  /// Channel widths and model width cut down for CPU-scale runs.
  static GeneratorConfig toy();

  /// Throws ConfigError on invalid values.
  void validate() const;

  nlohmann::json to_json() const;
  static GeneratorConfig from_json(const nlohmann::json& j);

  /// Fields that determine parameter shapes; checkpoints must agree on these.
  nlohmann::json architecture() const;
};

struct DiscriminatorConfig {
  std::int64_t vocab_size = 0;
  std::int64_t embed_dim = 256;
  std::int64_t hidden_dim = 256;  // GRU width
  std::int64_t shared_dim = 256;  // joint audio/caption embedding width
  // audio branch of the semantic discriminator mirrors the generator encoder
  std::array<std::int64_t, 4> encoder_channels{64, 128, 256, 512};
  std::int64_t audio_dim = 256;

  static DiscriminatorConfig toy();
  static DiscriminatorConfig matching(const GeneratorConfig& generator, const DiscriminatorConfig& widths);

  void validate() const;
  nlohmann::json to_json() const;
  static DiscriminatorConfig from_json(const nlohmann::json& j);
};

}  // namespace dac::model
