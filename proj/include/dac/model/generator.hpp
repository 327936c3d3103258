#pragma once

#include <torch/torch.h>

#include "dac/model/audio_encoder.hpp"
#include "dac/model/batch.hpp"
#include "dac/model/caption_decoder.hpp"
#include "dac/model/config.hpp"

namespace dac::model {

/// f(x): [B, M, d_model] audio features and a [B, M] validity mask.
struct EncodedAudio {
  torch::Tensor memory;
  torch::Tensor mask;

  std::int64_t size() const { return memory.size(0); }
  EncodedAudio select(std::int64_t index) const;
  EncodedAudio repeat(std::int64_t times) const;  // row-wise repeat_interleave
};

/// Caption generator G: CNN encoder and a Transformer decoder whose
/// cross-attention memory is the audio features concatenated with z_t.
class CaptionGeneratorImpl : public torch::nn::Module {
 public:
  explicit CaptionGeneratorImpl(GeneratorConfig config);

  EncodedAudio encode(const FeatureBatch& batch);

  /// Log-probabilities [B, L, V] of the next token after each prefix
  /// position. tokens [B, L]; noise [B, L, noise_dim] holds z_t for the step
  /// that consumes tokens[:, t]. <pad> and <sos> are never emitted.
  torch::Tensor log_probs(const EncodedAudio& audio, const torch::Tensor& tokens, const torch::Tensor& noise);

  /// Reference path that materializes [f(x) ; z_t] explicitly.
  torch::Tensor log_probs_concatenated(const EncodedAudio& audio, const torch::Tensor& tokens,
                                       const torch::Tensor& noise);

  /// sigma * N(0, I) noise for `rows` captions over all max_len - 1 steps,
  /// [rows, max_len - 1, noise_dim]. In fixed mode every step repeats the
  /// first draw.
  torch::Tensor draw_noise(std::int64_t rows, at::Generator& rng) const;
  torch::Tensor zero_noise(std::int64_t rows) const;

  /// Noise settings are not part of the architecture and may change between
  /// phases.
  void set_noise(double sigma, NoiseMode mode);

  const GeneratorConfig& config() const { return config_; }
  AudioEncoder& encoder() { return encoder_; }
  CaptionDecoder& decoder() { return decoder_; }

 private:
  torch::Tensor mask_logits(torch::Tensor logits) const;

  GeneratorConfig config_;
  AudioEncoder encoder_{nullptr};
  CaptionDecoder decoder_{nullptr};
};
TORCH_MODULE(CaptionGenerator);

/// Deterministic generator seeded for one phase.
at::Generator make_rng(std::uint64_t seed);

}  // namespace dac::model
