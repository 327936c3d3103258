#include "dac/training/mle.hpp"

#include <random>

#include "dac/corpus/vocabulary.hpp"
#include "dac/features/spec_augment.hpp"
#include "dac/model/batch.hpp"

namespace dac::training {
namespace {

using torch::indexing::Slice;

// <sos> ... <eos> ids as [B, L], cut at max_len tokens.
torch::Tensor reference_tokens(const TrainingSet& data, std::span<const std::size_t> indices,
                               std::span<const std::size_t> choice, std::int64_t max_len) {
  std::vector<const corpus::Caption*> captions;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    captions.push_back(&data.references(indices[k])[choice[k]]);
  }
  auto tokens = model::make_token_batch(captions).tokens;
  return tokens.size(1) > max_len ? tokens.index({Slice(), Slice(0, max_len)}) : tokens;
}

torch::Tensor batch_loss(model::CaptionGeneratorImpl& generator, const model::FeatureBatch& features,
                         const torch::Tensor& tokens, const torch::Tensor& noise) {
  const auto audio = generator.encode(features);
  const auto length = tokens.size(1);
  const auto lp = generator.log_probs(audio, tokens.index({Slice(), Slice(0, length - 1)}),
                                      noise.index({Slice(), Slice(0, length - 1)}));
  return mle_loss(lp, tokens.index({Slice(), Slice(1, length)}));
}

}  // namespace

torch::Tensor mle_loss(const torch::Tensor& log_probs, const torch::Tensor& targets) {
  const auto valid = targets != corpus::Vocabulary::kPad;
  // pad targets would pick -inf entries; route them to any finite class first
  const auto safe = targets.masked_fill(valid.logical_not(), corpus::Vocabulary::kEnd);
  const auto picked = log_probs.gather(2, safe.unsqueeze(2)).squeeze(2).masked_fill(valid.logical_not(), 0.0);
  const auto counts = valid.sum(1).to(log_probs.scalar_type());
  return (-picked.sum(1) / counts).mean();
}

double evaluate_mle_loss(model::CaptionGeneratorImpl& generator, const TrainingSet& data, ReferencePolicy policy) {
  torch::NoGradGuard no_grad;
  const bool was_training = generator.is_training();
  generator.eval();
  std::mt19937_64 rng(0);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t index[] = {i};
    const std::size_t choice[] = {policy == ReferencePolicy::first ? 0 : static_cast<std::size_t>(rng() % 5)};
    const auto tokens = reference_tokens(data, index, choice, generator.config().max_len);
    total += batch_loss(generator, data.features(index), tokens, generator.zero_noise(1)).item<double>();
  }
  generator.train(was_training);
  return total / static_cast<double>(data.size());
}

std::vector<double> pretrain_generator(model::CaptionGeneratorImpl& generator, const TrainingSet& data,
                                       const TrainConfig& config, TrainLog* log, const char* phase) {
  config.validate();
  const auto seed = phase_seed(config.seed, phase);
  std::mt19937_64 rng(seed);
  auto noise_rng = model::make_rng(seed ^ 0x5bd1e995ULL);
  torch::manual_seed(seed);
  torch::optim::Adam optimizer(generator.parameters(), torch::optim::AdamOptions(config.learning_rate));

  std::vector<double> losses;
  generator.train();
  for (std::int64_t epoch = 0; epoch < config.mle_epochs; ++epoch) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& batch : make_batches(data.size(), config.batch_size, rng)) {
      std::vector<std::size_t> choice;
      for (std::size_t k = 0; k < batch.size(); ++k) {
        choice.push_back(config.reference_policy == ReferencePolicy::first
                             ? 0
                             : std::uniform_int_distribution<std::size_t>(0, corpus::kRefsPerClip - 1)(rng));
      }
      model::FeatureBatch features;
      if (config.spec_augment) {
        std::vector<corpus::FeatureMatrix> augmented;
        for (auto i : batch) {
          augmented.push_back(features::spec_augment(data.clip(i).features, config.augment, rng));
        }
        std::vector<const corpus::FeatureMatrix*> ptrs;
        for (const auto& m : augmented) {
          ptrs.push_back(&m);
        }
        features = model::make_feature_batch(ptrs);
      } else {
        features = data.features(batch);
      }
      const auto tokens = reference_tokens(data, batch, choice, generator.config().max_len);
      const auto noise = generator.draw_noise(static_cast<std::int64_t>(batch.size()), noise_rng);
      auto loss = batch_loss(generator, features, tokens, noise);
      optimizer.zero_grad();
      loss.backward();
      optimizer.step();
      sum += loss.item<double>() * static_cast<double>(batch.size());
      count += batch.size();
    }
    losses.push_back(sum / static_cast<double>(count));
    if (log != nullptr) {
      log->write({{"phase", phase}, {"epoch", epoch + 1}, {"losses", {{"mle", losses.back()}}}});
    }
  }
  generator.eval();
  return losses;
}

}  // namespace dac::training
