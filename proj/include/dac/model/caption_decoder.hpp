#pragma once

#include <torch/torch.h>

#include "dac/model/config.hpp"

namespace dac::model {

/// Post-norm Transformer decoder layer. Cross-attention keys and values are
/// projected from [audio feature ; z_t] vectors, i.e. from width
/// d_model + noise_dim, where z_t is the noise of the query's own decoding
/// step.
class DecoderLayerImpl : public torch::nn::Module {
 public:
  DecoderLayerImpl(std::int64_t d_model, std::int64_t noise_dim, std::int64_t n_heads, std::int64_t ff_dim,
                   double dropout);

  /// x [B, L, d]; audio [B, M, d]; noise [B, L, noise_dim]; audio_mask [B, M]
  /// (true = valid step); causal [L, L] additive mask.
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& audio, const torch::Tensor& noise,
                        const torch::Tensor& audio_mask, const torch::Tensor& causal);

  /// Same computation with the concatenated [B, L, M, d + noise_dim] memory
  /// materialized; used to check the factored path.
  torch::Tensor forward_concatenated(const torch::Tensor& x, const torch::Tensor& memory,
                                     const torch::Tensor& audio_mask, const torch::Tensor& causal);

 private:
  torch::Tensor self_attention(const torch::Tensor& x, const torch::Tensor& causal);
  torch::Tensor feed_forward(const torch::Tensor& x);

  std::int64_t d_model_;
  std::int64_t noise_dim_;
  std::int64_t n_heads_;
  torch::nn::Linear self_q_{nullptr}, self_k_{nullptr}, self_v_{nullptr}, self_out_{nullptr};
  torch::nn::Linear cross_q_{nullptr}, cross_k_{nullptr}, cross_v_{nullptr}, cross_out_{nullptr};
  torch::nn::Linear ff1_{nullptr}, ff2_{nullptr};
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr}, norm3_{nullptr};
  torch::nn::Dropout dropout_{nullptr};
};
TORCH_MODULE(DecoderLayer);

/// Word embedding + sinusoidal positions, a stack of decoder layers and the
/// vocabulary projection.
class CaptionDecoderImpl : public torch::nn::Module {
 public:
  explicit CaptionDecoderImpl(const GeneratorConfig& config);

  /// tokens [B, L] int64 -> logits [B, L, V].
  torch::Tensor forward(const torch::Tensor& tokens, const torch::Tensor& audio, const torch::Tensor& noise,
                        const torch::Tensor& audio_mask);

  torch::Tensor forward_concatenated(const torch::Tensor& tokens, const torch::Tensor& memory,
                                     const torch::Tensor& audio_mask);

  /// Width of the vectors the cross-attention consumes.
  std::int64_t memory_width() const { return d_model_ + noise_dim_; }

 private:
  torch::Tensor embed(const torch::Tensor& tokens);

  std::int64_t d_model_;
  std::int64_t noise_dim_;
  torch::nn::Embedding embedding_{nullptr};
  torch::Tensor positions_;
  torch::nn::ModuleList layers_;
  torch::nn::Linear out_{nullptr};
};
TORCH_MODULE(CaptionDecoder);

}  // namespace dac::model
