#include "dac/training/reward.hpp"

#include "dac/errors.hpp"
#include "dac/metrics/cider.hpp"

namespace dac::training {

double effective_lambda(double lambda, const ComponentMask& mask) {
  if (!mask.evaluator) {
    return 1.0;
  }
  if (!mask.any_discriminator()) {
    return 0.0;
  }
  return lambda;
}

double combine_reward(double d_n, double d_s, double l_e, double lambda, const ComponentMask& mask) {
  const double l = effective_lambda(lambda, mask);
  const double adversarial = (mask.naturalness ? d_n : 0.0) + (mask.semantic ? d_s : 0.0);
  return l * adversarial + (1.0 - l) * (mask.evaluator ? l_e : 0.0);
}

std::vector<CaptionScores> score_captions(const RewardContext& context, std::span<const std::size_t> indices,
                                          const model::FeatureBatch& features,
                                          const std::vector<model::TokenSeq>& sequences) {
  if (indices.size() != sequences.size() || static_cast<std::int64_t>(indices.size()) != features.size()) {
    throw InputError("reward scoring needs one caption per clip");
  }
  if (context.data == nullptr) {
    throw InputError("reward context lacks the training set");
  }
  torch::NoGradGuard no_grad;
  std::vector<CaptionScores> out(sequences.size());
  const auto tokens = model::pack_tokens(sequences);
  const auto lengths = model::sequence_lengths(sequences);
  if (context.mask.naturalness) {
    if (context.naturalness == nullptr) {
      throw InputError("naturalness reward enabled without a naturalness discriminator");
    }
    const auto scores = context.naturalness->forward(tokens, lengths);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].d_n = scores[static_cast<std::int64_t>(i)].item<double>();
    }
  }
  if (context.mask.semantic) {
    if (context.semantic == nullptr) {
      throw InputError("semantic reward enabled without a semantic discriminator");
    }
    const auto scores = context.semantic->forward(features, tokens, lengths);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].d_s = scores[static_cast<std::int64_t>(i)].item<double>();
    }
  }
  if (context.mask.evaluator) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto candidate = token_sentence(sequences[i], context.data->vocab());
      out[i].l_e = metrics::cider(candidate, context.data->reference_sentences(indices[i]), context.data->idf());
    }
  }
  for (auto& s : out) {
    s.combined = combine_reward(s.d_n, s.d_s, s.l_e, context.lambda, context.mask);
  }
  return out;
}

std::vector<RewardBreakdown> compute_rewards(const RewardContext& context, std::span<const std::size_t> indices,
                                             const model::FeatureBatch& features,
                                             const std::vector<model::TokenSeq>& samples,
                                             const std::vector<model::TokenSeq>& baselines) {
  const auto sampled = score_captions(context, indices, features, samples);
  const auto greedy = score_captions(context, indices, features, baselines);
  std::vector<RewardBreakdown> out;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const auto& s = sampled[i];
    out.push_back({s.d_n, s.d_s, s.l_e, s.combined, greedy[i].combined, s.combined - greedy[i].combined});
  }
  return out;
}

}  // namespace dac::training
