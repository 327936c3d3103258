#pragma once

#include <array>
#include <string>

#include <torch/torch.h>

namespace dac::model {

/// conv3x3 -> BN -> ReLU, twice, then 2x2 max-pool over (time, frequency).
class ConvBlockImpl : public torch::nn::Module {
 public:
  ConvBlockImpl(std::int64_t in_channels, std::int64_t out_channels);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr};
  torch::nn::Conv2d conv2_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr};
  torch::nn::BatchNorm2d bn2_{nullptr};
};
TORCH_MODULE(ConvBlock);

/// Ten-layer CNN audio encoder: four conv blocks, mean over frequency and a
/// Linear-ReLU-Linear head. Submodule names follow the PANNs layout
/// (conv_block1.conv1.weight, ...). Time is downsampled by 16.
class AudioEncoderImpl : public torch::nn::Module {
 public:
  AudioEncoderImpl(const std::array<std::int64_t, 4>& channels, std::int64_t out_dim);

  /// [B, T, 64] log-mel -> [B, T / 16, out_dim]. Throws InputError when
  /// T < 16.
  torch::Tensor forward(const torch::Tensor& features);

  static std::int64_t output_steps(std::int64_t frames) { return frames / 16; }
  std::int64_t out_dim() const { return out_dim_; }

 private:
  std::array<ConvBlock, 4> blocks_{ConvBlock{nullptr}, ConvBlock{nullptr}, ConvBlock{nullptr},
                                   ConvBlock{nullptr}};
  torch::nn::Linear fc1_{nullptr};
  torch::nn::Linear fc2_{nullptr};
  std::int64_t out_dim_;
};
TORCH_MODULE(AudioEncoder);

/// Copies conv-block parameters and batch-norm statistics from a pickled
/// state dict (torch.save of a dict name -> tensor, optionally prefixed with
/// "model."). Returns the number of tensors copied; throws LoadError when a
/// conv-block tensor is missing or has the wrong shape.
std::size_t load_pretrained_encoder(AudioEncoderImpl& encoder, const std::string& path);

}  // namespace dac::model
