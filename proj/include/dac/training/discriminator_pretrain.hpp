#pragma once

#include <vector>

#include "dac/discriminators/naturalness.hpp"
#include "dac/discriminators/semantic.hpp"
#include "dac/model/decoding.hpp"
#include "dac/training/config.hpp"
#include "dac/training/dataset.hpp"
#include "dac/training/train_log.hpp"

namespace dac::training {

/// `per_clip` generated captions for every clip, decoded the way captions are
/// generated at test time: greedy decoding, one noise draw per caption.
std::vector<std::vector<model::TokenSeq>> generated_caption_pool(model::CaptionGeneratorImpl& generator,
                                                              const TrainingSet& data, std::size_t per_clip,
                                                              std::uint64_t seed);

struct DiscriminatorPretrainResult {
  std::vector<double> naturalness_losses;  // per epoch
  std::vector<double> semantic_losses;
};

/// Copies the generator's encoder into D_S's frozen audio branch, generates
/// the pool C_g once (five captions per clip), then trains for disc_pretrain_epochs. An epoch
/// visits every (clip, reference) pair once: D_N contrasts references with
/// C_g; D_S contrasts paired references with unpaired ones from the same
/// batch (no generated term during pretraining).
DiscriminatorPretrainResult pretrain_discriminators(model::CaptionGeneratorImpl& generator,
                                                    discriminators::NaturalnessDiscriminatorImpl& naturalness,
                                                    discriminators::SemanticDiscriminatorImpl& semantic,
                                                    const TrainingSet& data, const TrainConfig& config,
                                                    TrainLog* log = nullptr);

/// C_u token sequences for every clip of a batch (per_clip of them, flattened
/// in batch order) and the index of the clip each one is scored against.
struct UnpairedBatch {
  std::vector<model::TokenSeq> sequences;
  std::vector<std::size_t> target;  // position within the batch
};
UnpairedBatch unpaired_batch(const TrainingSet& data, std::span<const std::size_t> batch, std::mt19937_64& rng,
                             std::size_t per_clip);

/// D_S scores for one batch: paired references, C_u and (optionally) C_g.
/// All captions go through the caption branch in a single call so the
/// head's batch statistics see the whole mix. Needs at least two clips.
struct SemanticBatchScores {
  torch::Tensor paired;
  torch::Tensor unpaired;   // undefined when the batch has none
  torch::Tensor generated;  // undefined when no C_g was given
};
SemanticBatchScores semantic_batch_scores(discriminators::SemanticDiscriminatorImpl& semantic,
                                          const model::FeatureBatch& features,
                                          const std::vector<model::TokenSeq>& paired, const UnpairedBatch& unpaired,
                                          const std::vector<model::TokenSeq>& generated);

}  // namespace dac::training
