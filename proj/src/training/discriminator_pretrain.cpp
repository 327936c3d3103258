#include "dac/training/discriminator_pretrain.hpp"

#include <algorithm>
#include <numeric>

#include "dac/corpus/unpaired.hpp"
#include "dac/discriminators/losses.hpp"
#include "dac/training/reward.hpp"

namespace dac::training {

std::vector<std::vector<model::TokenSeq>> generated_caption_pool(model::CaptionGeneratorImpl& generator,
                                                              const TrainingSet& data, std::size_t per_clip,
                                                              std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  const bool was_training = generator.is_training();
  generator.eval();
  auto rng = model::make_rng(seed);
  std::vector<std::vector<model::TokenSeq>> pool;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t index[] = {i};
    const auto rows = static_cast<std::int64_t>(per_clip);
    const auto audio = generator.encode(data.features(index)).repeat(rows);
    pool.push_back(model::greedy_decode(generator, audio, generator.draw_noise(rows, rng)));
  }
  generator.train(was_training);
  return pool;
}

UnpairedBatch unpaired_batch(const TrainingSet& data, std::span<const std::size_t> batch, std::mt19937_64& rng,
                             std::size_t per_clip) {
  const auto clips = data.clip_pointers(batch);
  const auto drawn = corpus::sample_unpaired(clips, rng, per_clip);
  UnpairedBatch out;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    for (const auto& u : drawn.at(clips[k]->clip_id)) {
      out.sequences.push_back(data.references(batch[u.origin])[u.reference].tokens);
      out.target.push_back(k);
    }
  }
  return out;
}

SemanticBatchScores semantic_batch_scores(discriminators::SemanticDiscriminatorImpl& semantic,
                                          const model::FeatureBatch& features,
                                          const std::vector<model::TokenSeq>& paired, const UnpairedBatch& unpaired,
                                          const std::vector<model::TokenSeq>& generated) {
  const auto rows = static_cast<std::int64_t>(paired.size());
  std::vector<model::TokenSeq> all = paired;
  all.insert(all.end(), unpaired.sequences.begin(), unpaired.sequences.end());
  all.insert(all.end(), generated.begin(), generated.end());
  const auto audio = semantic.embed_audio(features);
  const auto captions = semantic.embed_captions(model::pack_tokens(all), model::sequence_lengths(all));
  using discriminators::SemanticDiscriminatorImpl;
  SemanticBatchScores out;
  out.paired = SemanticDiscriminatorImpl::score(audio, captions.narrow(0, 0, rows));
  auto offset = rows;
  if (!unpaired.sequences.empty()) {
    const auto n = static_cast<std::int64_t>(unpaired.sequences.size());
    const auto target = torch::tensor(std::vector<std::int64_t>(unpaired.target.begin(), unpaired.target.end()));
    out.unpaired = SemanticDiscriminatorImpl::score(audio.index_select(0, target), captions.narrow(0, offset, n));
    offset += n;
  }
  if (!generated.empty()) {
    out.generated = SemanticDiscriminatorImpl::score(audio, captions.narrow(0, offset, rows));
  }
  return out;
}

DiscriminatorPretrainResult pretrain_discriminators(model::CaptionGeneratorImpl& generator,
                                                    discriminators::NaturalnessDiscriminatorImpl& naturalness,
                                                    discriminators::SemanticDiscriminatorImpl& semantic,
                                                    const TrainingSet& data, const TrainConfig& config,
                                                    TrainLog* log) {
  config.validate();
  const auto seed = phase_seed(config.seed, "disc-pretrain");
  std::mt19937_64 rng(seed);
  torch::manual_seed(seed);
  semantic.copy_audio_encoder(*generator.encoder());

  DiscriminatorPretrainResult result;
  if (config.disc_pretrain_epochs == 0) {
    return result;
  }
  const auto pool = generated_caption_pool(generator, data, corpus::kRefsPerClip, seed ^ 0x2545f4914f6cdd1dULL);
  torch::optim::Adam opt_n(naturalness.parameters(), torch::optim::AdamOptions(config.disc_learning_rate));
  torch::optim::Adam opt_s(semantic.parameters(), torch::optim::AdamOptions(config.disc_learning_rate));
  naturalness.train();
  semantic.train();

  for (std::int64_t epoch = 0; epoch < config.disc_pretrain_epochs; ++epoch) {
    // each clip walks through its references (and pooled samples) in a
    // shuffled order, one per round
    std::vector<std::array<std::size_t, corpus::kRefsPerClip>> order(data.size());
    for (auto& o : order) {
      std::iota(o.begin(), o.end(), 0);
      std::shuffle(o.begin(), o.end(), rng);
    }
    double sum_n = 0.0;
    double sum_s = 0.0;
    std::size_t steps_n = 0;
    std::size_t steps_s = 0;
    for (std::size_t round = 0; round < corpus::kRefsPerClip; ++round) {
      for (const auto& batch : make_batches(data.size(), config.batch_size, rng)) {
        std::vector<model::TokenSeq> real;
        std::vector<model::TokenSeq> fake;
        for (auto i : batch) {
          real.push_back(data.references(i)[order[i][round]].tokens);
          fake.push_back(pool[i][order[i][round]]);
        }
        const auto real_tokens = model::pack_tokens(real);
        const auto real_lengths = model::sequence_lengths(real);

        auto loss_n = discriminators::naturalness_loss(
            naturalness.forward(real_tokens, real_lengths),
            naturalness.forward(model::pack_tokens(fake), model::sequence_lengths(fake)));
        opt_n.zero_grad();
        loss_n.backward();
        opt_n.step();
        sum_n += loss_n.item<double>();
        ++steps_n;

        if (batch.size() < 2) {
          continue;  // no other clip to draw an unpaired caption from
        }
        const auto features = data.features(batch);
        const auto unpaired = unpaired_batch(data, batch, rng, static_cast<std::size_t>(config.unpaired_per_clip));
        const auto scores = semantic_batch_scores(semantic, features, real, unpaired, {});
        auto loss_s = discriminators::semantic_loss(scores.paired, scores.unpaired, torch::Tensor(),
                                                    config.semantic_criterion);
        opt_s.zero_grad();
        loss_s.backward();
        opt_s.step();
        sum_s += loss_s.item<double>();
        ++steps_s;
      }
    }
    result.naturalness_losses.push_back(sum_n / static_cast<double>(std::max<std::size_t>(1, steps_n)));
    result.semantic_losses.push_back(sum_s / static_cast<double>(std::max<std::size_t>(1, steps_s)));
    if (log != nullptr) {
      log->write({{"phase", "disc-pretrain"},
                  {"epoch", epoch + 1},
                  {"losses", {{"naturalness", result.naturalness_losses.back()},
                              {"semantic", result.semantic_losses.back()}}}});
    }
  }
  naturalness.eval();
  semantic.eval();
  return result;
}

}  // namespace dac::training
