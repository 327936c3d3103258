#include "dac/training/adversarial.hpp"

#include <cmath>

#include "dac/discriminators/losses.hpp"
#include "dac/errors.hpp"
#include "dac/metrics/report.hpp"
#include "dac/model/decoding.hpp"
#include "dac/training/discriminator_pretrain.hpp"
#include "dac/training/inference.hpp"
#include "dac/training/reward.hpp"
#include "dac/training/scst.hpp"

namespace dac::training {
namespace {

bool has_gradient(const torch::nn::Module& module) {
  for (const auto& p : module.parameters()) {
    if (p.grad().defined() && p.grad().abs().max().item<double>() != 0.0) {
      return true;
    }
  }
  return false;
}

std::vector<torch::Tensor> snapshot(const torch::nn::Module& module) {
  std::vector<torch::Tensor> out;
  for (const auto& p : module.parameters()) {
    out.push_back(p.detach().clone());
  }
  for (const auto& b : module.buffers()) {
    out.push_back(b.detach().clone());
  }
  return out;
}

void restore(torch::nn::Module& module, const std::vector<torch::Tensor>& saved) {
  torch::NoGradGuard no_grad;
  std::size_t k = 0;
  for (auto& p : module.parameters()) {
    p.copy_(saved[k++]);
  }
  for (auto& b : module.buffers()) {
    b.copy_(saved[k++]);
  }
}

double validation_cider(model::CaptionGeneratorImpl& generator, const TrainingSet& validation, std::uint64_t seed) {
  GenerationOptions options;
  options.seed = seed;
  const auto generated = generate_captions(generator, validation.clips(), validation.vocab(), options);
  return metrics::evaluate_fidelity(to_caption_sets(generated), reference_sets(validation.clips())).cider_raw;
}

}  // namespace

nlohmann::json AdversarialEpoch::to_json() const {
  nlohmann::json j = {{"phase", "adversarial"},
                      {"epoch", epoch},
                      {"losses",
                       {{"naturalness", naturalness_loss}, {"semantic", semantic_loss}, {"generator", generator_loss}}},
                      {"mean_reward",
                       {{"d_n", mean_d_n},
                        {"d_s", mean_d_s},
                        {"l_e", mean_l_e},
                        {"combined", mean_reward},
                        {"baseline", mean_baseline},
                        {"advantage", mean_advantage}}}};
  if (validation_cider) {
    j["val_metrics"] = {{"cider_raw", *validation_cider}};
  }
  return j;
}

AdversarialResult train_adversarial(model::CaptionGeneratorImpl& generator,
                                    discriminators::NaturalnessDiscriminatorImpl& naturalness,
                                    discriminators::SemanticDiscriminatorImpl& semantic, const TrainingSet& data,
                                    const TrainConfig& config, const TrainingSet* validation, TrainLog* log) {
  config.validate();
  if (data.size() < 2) {
    throw InputError("adversarial training needs at least two clips for unpaired captions");
  }
  const auto seed = phase_seed(config.seed, "adversarial");
  std::mt19937_64 rng(seed);
  auto noise_rng = model::make_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  torch::manual_seed(seed);
  torch::optim::Adam opt_g(generator.parameters(), torch::optim::AdamOptions(config.adv_learning_rate));
  torch::optim::Adam opt_n(naturalness.parameters(), torch::optim::AdamOptions(config.adv_disc_learning_rate));
  torch::optim::Adam opt_s(semantic.parameters(), torch::optim::AdamOptions(config.adv_disc_learning_rate));
  const auto& mask = config.components;
  const RewardContext context{mask.naturalness ? &naturalness : nullptr, mask.semantic ? &semantic : nullptr,
                              &data, config.lambda, mask};

  AdversarialResult result;
  std::optional<double> best_cider;
  std::vector<torch::Tensor> best_state;

  for (std::int64_t epoch = 0; epoch < config.adv_epochs; ++epoch) {
    AdversarialEpoch summary;
    summary.epoch = epoch + 1;
    std::size_t clips_seen = 0;
    std::size_t batches = 0;
    for (const auto& batch : make_batches(data.size(), config.batch_size, rng)) {
      const auto rows = static_cast<std::int64_t>(batch.size());
      const auto features = data.features(batch);

      // (i) C_g from the current generator, C_x and C_u from the corpus
      generator.eval();
      std::vector<model::SampledCaption> samples;
      std::vector<model::TokenSeq> baselines;
      {
        torch::NoGradGuard no_grad;
        const auto audio = generator.encode(features);
        samples = model::sample_captions(generator, audio, noise_rng);
        std::vector<torch::Tensor> traces;
        for (const auto& s : samples) {
          traces.push_back(s.noise_trace);
        }
        baselines = model::greedy_decode(generator, audio, torch::stack(traces));
      }
      std::vector<model::TokenSeq> generated;
      std::vector<model::TokenSeq> real;
      for (std::size_t k = 0; k < batch.size(); ++k) {
        generated.push_back(samples[k].tokens);
        const auto ref = std::uniform_int_distribution<std::size_t>(0, corpus::kRefsPerClip - 1)(rng);
        real.push_back(data.references(batch[k])[ref].tokens);
      }
      const auto unpaired = batch.size() >= 2
                                ? unpaired_batch(data, batch, rng, static_cast<std::size_t>(config.unpaired_per_clip))
                                : UnpairedBatch{};
      const auto real_tokens = model::pack_tokens(real);
      const auto real_lengths = model::sequence_lengths(real);
      const auto gen_tokens = model::pack_tokens(generated);
      const auto gen_lengths = model::sequence_lengths(generated);

      // (ii) one discriminator update; C_g enters as token ids, so no gradient
      // may reach G
      opt_g.zero_grad();
      if (mask.naturalness) {
        naturalness.train();
        auto loss = discriminators::naturalness_loss(naturalness.forward(real_tokens, real_lengths),
                                                     naturalness.forward(gen_tokens, gen_lengths));
        opt_n.zero_grad();
        loss.backward();
        opt_n.step();
        summary.naturalness_loss += loss.item<double>();
        naturalness.eval();
      }
      if (mask.semantic && rows >= 2) {
        semantic.train();
        const auto scores = semantic_batch_scores(semantic, features, real, unpaired, generated);
        auto loss = discriminators::semantic_loss(scores.paired, scores.unpaired, scores.generated,
                                                  config.semantic_criterion);
        opt_s.zero_grad();
        loss.backward();
        opt_s.step();
        summary.semantic_loss += loss.item<double>();
        semantic.eval();
      }
      if (has_gradient(generator)) {
        throw TrainingError("discriminator step produced generator gradients");
      }
      ++result.discriminator_steps;

      // (iii) rewards, (iv) one generator update
      const auto rewards = compute_rewards(context, batch, features, generated, baselines);
      std::vector<double> advantages;
      for (const auto& r : rewards) {
        if (!std::isfinite(r.combined) || !std::isfinite(r.baseline)) {
          throw TrainingError("non-finite reward at adversarial epoch " + std::to_string(epoch + 1) +
                              " (d_n=" + std::to_string(r.d_n) + ", d_s=" + std::to_string(r.d_s) +
                              ", l_e=" + std::to_string(r.l_e) + ")");
        }
        advantages.push_back(r.advantage);
        summary.mean_d_n += r.d_n;
        summary.mean_d_s += r.d_s;
        summary.mean_l_e += r.l_e;
        summary.mean_reward += r.combined;
        summary.mean_baseline += r.baseline;
        summary.mean_advantage += r.advantage;
      }
      if (result.discriminator_steps != result.generator_steps + 1) {
        throw TrainingError("discriminator/generator alternation violated");
      }
      const auto stats = scst_update(generator, opt_g, features, samples, advantages);
      ++result.generator_steps;
      summary.generator_loss += stats.loss;
      clips_seen += static_cast<std::size_t>(rows);
      ++batches;
    }
    const auto nb = static_cast<double>(batches);
    const auto nc = static_cast<double>(clips_seen);
    summary.naturalness_loss /= nb;
    summary.semantic_loss /= nb;
    summary.generator_loss /= nb;
    summary.mean_d_n /= nc;
    summary.mean_d_s /= nc;
    summary.mean_l_e /= nc;
    summary.mean_reward /= nc;
    summary.mean_baseline /= nc;
    summary.mean_advantage /= nc;
    if (!std::isfinite(summary.mean_reward)) {
      throw TrainingError("mean reward diverged at adversarial epoch " + std::to_string(epoch + 1));
    }
    if (validation != nullptr) {
      summary.validation_cider = validation_cider(generator, *validation, seed + static_cast<std::uint64_t>(epoch));
      if (config.select_on_validation && (!best_cider || *summary.validation_cider > *best_cider)) {
        best_cider = summary.validation_cider;
        best_state = snapshot(generator);
        result.selected_epoch = summary.epoch;
      }
    }
    if (log != nullptr) {
      log->write(summary.to_json());
    }
    result.epochs.push_back(summary);
  }
  if (!best_state.empty()) {
    restore(generator, best_state);
  }
  generator.eval();
  return result;
}

}  // namespace dac::training
