#pragma once

#include <string>

#include <torch/torch.h>

#include "dac/model/config.hpp"

namespace dac::discriminators {

/// D_N: own embedding table, single-layer GRU over the whole token sequence
/// (sentinels included), linear head and sigmoid on the last valid state.
class NaturalnessDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit NaturalnessDiscriminatorImpl(model::DiscriminatorConfig config);

  /// tokens [B, L] int64 (pad-padded), lengths [B] -> probabilities [B].
  torch::Tensor forward(const torch::Tensor& tokens, const torch::Tensor& lengths);

  const model::DiscriminatorConfig& config() const { return config_; }

 private:
  model::DiscriminatorConfig config_;
  torch::nn::Embedding embedding_{nullptr};
  torch::nn::GRU gru_{nullptr};
  torch::nn::Linear head_{nullptr};
};
TORCH_MODULE(NaturalnessDiscriminator);

/// GRU outputs [B, L, H] read at position lengths - 1 -> [B, H].
torch::Tensor last_valid_state(const torch::Tensor& outputs, const torch::Tensor& lengths);

void save_naturalness(const std::string& path, const NaturalnessDiscriminatorImpl& d);
NaturalnessDiscriminator load_naturalness(const std::string& path,
                                          const model::DiscriminatorConfig* expected = nullptr);

}  // namespace dac::discriminators
