#pragma once

#include <span>
#include <vector>

#include <torch/torch.h>

#include "dac/corpus/caption.hpp"
#include "dac/corpus/feature_matrix.hpp"

namespace dac::model {

/// All network computation runs in double precision.
inline constexpr auto kReal = torch::kFloat64;

/// Zero-padded [B, T_max, 64] feature tensor with per-clip frame counts.
struct FeatureBatch {
  torch::Tensor features;
  std::vector<std::int64_t> frames;

  std::int64_t size() const { return static_cast<std::int64_t>(frames.size()); }
};

FeatureBatch make_feature_batch(std::span<const corpus::FeatureMatrix* const> clips);
FeatureBatch make_feature_batch(const corpus::FeatureMatrix& clip);

/// <pad>-padded [B, L_max] int64 token tensor with per-caption lengths.
struct TokenBatch {
  torch::Tensor tokens;
  torch::Tensor lengths;  // int64 [B]
};

TokenBatch make_token_batch(std::span<const corpus::Caption* const> captions);

}  // namespace dac::model
