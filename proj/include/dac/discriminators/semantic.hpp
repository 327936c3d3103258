#pragma once

#include <string>

#include <torch/torch.h>

#include "dac/model/audio_encoder.hpp"
#include "dac/model/batch.hpp"
#include "dac/model/config.hpp"

namespace dac::discriminators {

/// D_S: frozen CNN audio encoder + mean pooling + MLP on one side, embedding
/// + GRU + MLP on the other; score = ReLU(cosine) in the shared space.
class SemanticDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit SemanticDiscriminatorImpl(model::DiscriminatorConfig config);

  /// [B, shared_dim]
  torch::Tensor embed_audio(const model::FeatureBatch& batch);
  torch::Tensor embed_captions(const torch::Tensor& tokens, const torch::Tensor& lengths);

  /// Row-wise ReLU(cosine) of two [B, D] embeddings -> [B].
  static torch::Tensor score(const torch::Tensor& audio_embedding, const torch::Tensor& caption_embedding);

  torch::Tensor forward(const model::FeatureBatch& batch, const torch::Tensor& tokens, const torch::Tensor& lengths);

  /// Copies the generator's encoder weights into the audio branch. The
  /// branch stays frozen: no gradients and always in eval mode.
  void copy_audio_encoder(const model::AudioEncoderImpl& source);

  /// All audio-branch parameters and buffers, flattened, for freeze checks.
  torch::Tensor audio_branch_snapshot() const;

  void train(bool on = true) override;

  const model::DiscriminatorConfig& config() const { return config_; }

 private:
  model::DiscriminatorConfig config_;
  model::AudioEncoder audio_encoder_{nullptr};
  torch::nn::Sequential audio_head_{nullptr};
  torch::nn::Embedding embedding_{nullptr};
  torch::nn::GRU gru_{nullptr};
  torch::nn::Sequential caption_head_{nullptr};
};
TORCH_MODULE(SemanticDiscriminator);

void save_semantic(const std::string& path, const SemanticDiscriminatorImpl& d);
SemanticDiscriminator load_semantic(const std::string& path, const model::DiscriminatorConfig* expected = nullptr);

}  // namespace dac::discriminators
