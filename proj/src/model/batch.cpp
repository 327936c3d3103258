#include "dac/model/batch.hpp"

#include <algorithm>

#include "dac/errors.hpp"

namespace dac::model {

FeatureBatch make_feature_batch(std::span<const corpus::FeatureMatrix* const> clips) {
  if (clips.empty()) {
    throw InputError("empty feature batch");
  }
  std::size_t max_frames = 0;
  for (const auto* clip : clips) {
    corpus::validate_features(*clip);
    max_frames = std::max(max_frames, clip->frames());
  }
  const auto batch = static_cast<std::int64_t>(clips.size());
  auto features = torch::zeros({batch, static_cast<std::int64_t>(max_frames),
                                static_cast<std::int64_t>(corpus::kMelBins)},
                               torch::TensorOptions().dtype(kReal));
  auto acc = features.accessor<double, 3>();
  FeatureBatch out;
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& clip = *clips[static_cast<std::size_t>(b)];
    for (std::size_t t = 0; t < clip.frames(); ++t) {
      for (std::size_t m = 0; m < clip.bins(); ++m) {
        acc[b][static_cast<std::int64_t>(t)][static_cast<std::int64_t>(m)] = clip.at(t, m);
      }
    }
    out.frames.push_back(static_cast<std::int64_t>(clip.frames()));
  }
  out.features = features;
  return out;
}

FeatureBatch make_feature_batch(const corpus::FeatureMatrix& clip) {
  const corpus::FeatureMatrix* one = &clip;
  return make_feature_batch(std::span<const corpus::FeatureMatrix* const>(&one, 1));
}

TokenBatch make_token_batch(std::span<const corpus::Caption* const> captions) {
  if (captions.empty()) {
    throw InputError("empty caption batch");
  }
  std::size_t max_len = 0;
  for (const auto* c : captions) {
    if (c->tokens.empty()) {
      throw InputError("caption without tokens");
    }
    max_len = std::max(max_len, c->tokens.size());
  }
  const auto batch = static_cast<std::int64_t>(captions.size());
  auto tokens = torch::full({batch, static_cast<std::int64_t>(max_len)}, corpus::Vocabulary::kPad, torch::kInt64);
  auto lengths = torch::zeros({batch}, torch::kInt64);
  auto tok = tokens.accessor<std::int64_t, 2>();
  auto len = lengths.accessor<std::int64_t, 1>();
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& ids = captions[static_cast<std::size_t>(b)]->tokens;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      tok[b][static_cast<std::int64_t>(i)] = ids[i];
    }
    len[b] = static_cast<std::int64_t>(ids.size());
  }
  return {tokens, lengths};
}

}  // namespace dac::model
