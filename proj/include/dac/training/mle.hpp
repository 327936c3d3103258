#pragma once

#include <vector>

#include <torch/torch.h>

#include "dac/model/generator.hpp"
#include "dac/training/config.hpp"
#include "dac/training/dataset.hpp"
#include "dac/training/train_log.hpp"

namespace dac::training {

/// Teacher-forced cross-entropy. log_probs [B, L, V] predicts targets [B, L];
/// <pad> targets are skipped. Each caption contributes its mean over its T
/// targets (content tokens + <eos>); the batch loss is the mean over captions.
torch::Tensor mle_loss(const torch::Tensor& log_probs, const torch::Tensor& targets);

/// Mean MLE loss of one reference per clip under the current weights, with
/// zero noise and no autograd.
double evaluate_mle_loss(model::CaptionGeneratorImpl& generator, const TrainingSet& data, ReferencePolicy policy);

/// MLE pretraining for config.mle_epochs epochs with Adam. Noise is drawn
/// with the generator's own sigma and mode. Returns the per-epoch mean loss.
std::vector<double> pretrain_generator(model::CaptionGeneratorImpl& generator, const TrainingSet& data,
                                       const TrainConfig& config, TrainLog* log = nullptr,
                                       const char* phase = "mle");

}  // namespace dac::training
