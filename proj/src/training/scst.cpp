#include "dac/training/scst.hpp"

#include <algorithm>

#include "dac/errors.hpp"

namespace dac::training {

torch::Tensor scst_loss(model::CaptionGeneratorImpl& generator, const model::FeatureBatch& features,
                        const std::vector<model::SampledCaption>& samples, std::span<const double> advantages) {
  if (samples.empty() || samples.size() != advantages.size() ||
      static_cast<std::int64_t>(samples.size()) != features.size()) {
    throw InputError("SCST needs one sample and one advantage per clip");
  }
  std::vector<model::TokenSeq> sequences;
  std::vector<torch::Tensor> traces;
  for (const auto& s : samples) {
    sequences.push_back(s.tokens);
    traces.push_back(s.noise_trace);
  }
  const auto tokens = model::pack_tokens(sequences);
  const auto noise = torch::stack(traces);
  const auto audio = generator.encode(features);
  const auto log_prob = model::sequence_log_probs(generator, audio, tokens, noise).sum(1);
  const auto adv = torch::tensor(std::vector<double>(advantages.begin(), advantages.end()),
                                 torch::TensorOptions().dtype(model::kReal));
  return -(adv * log_prob).mean();
}

ScstStats scst_update(model::CaptionGeneratorImpl& generator, torch::optim::Optimizer& optimizer,
                      const model::FeatureBatch& features, const std::vector<model::SampledCaption>& samples,
                      std::span<const double> advantages) {
  ScstStats stats;
  for (double a : advantages) {
    stats.mean_advantage += a;
  }
  stats.mean_advantage /= static_cast<double>(std::max<std::size_t>(1, advantages.size()));
  if (std::all_of(advantages.begin(), advantages.end(), [](double a) { return a == 0.0; })) {
    return stats;
  }
  const bool was_training = generator.is_training();
  generator.eval();
  auto loss = scst_loss(generator, features, samples, advantages);
  optimizer.zero_grad();
  loss.backward();
  optimizer.step();
  generator.train(was_training);
  stats.loss = loss.item<double>();
  stats.stepped = true;
  return stats;
}

}  // namespace dac::training
