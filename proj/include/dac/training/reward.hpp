#pragma once

#include <span>
#include <vector>

#include "dac/discriminators/naturalness.hpp"
#include "dac/discriminators/semantic.hpp"
#include "dac/model/decoding.hpp"
#include "dac/training/config.hpp"
#include "dac/training/dataset.hpp"

namespace dac::training {

/// Reward components of one caption and r = lambda (D_N + D_S) + (1 - lambda) L_E.
/// L_E is raw CIDEr-D against the clip's five references.
struct CaptionScores {
  double d_n = 0.0;
  double d_s = 0.0;
  double l_e = 0.0;
  double combined = 0.0;
};

struct RewardBreakdown {
  double d_n = 0.0;
  double d_s = 0.0;
  double l_e = 0.0;
  double combined = 0.0;  // r(c)
  double baseline = 0.0;  // r(c_hat)
  double advantage = 0.0;
};

/// lambda as applied: 1 when L_E is masked out, 0 when both discriminators are.
double effective_lambda(double lambda, const ComponentMask& mask);

/// Masked components count as 0.
double combine_reward(double d_n, double d_s, double l_e, double lambda, const ComponentMask& mask);

/// Discriminators and data used to score captions. Pointers to masked-out
/// discriminators may be null.
struct RewardContext {
  discriminators::NaturalnessDiscriminatorImpl* naturalness = nullptr;
  discriminators::SemanticDiscriminatorImpl* semantic = nullptr;
  const TrainingSet* data = nullptr;
  double lambda = 1.0;
  ComponentMask mask;
};

/// Scores sequences for the clips `indices` (one sequence per clip, aligned),
/// without autograd. Captions cut at the length cap are scored as they are.
std::vector<CaptionScores> score_captions(const RewardContext& context, std::span<const std::size_t> indices,
                                          const model::FeatureBatch& features,
                                          const std::vector<model::TokenSeq>& sequences);

std::vector<RewardBreakdown> compute_rewards(const RewardContext& context, std::span<const std::size_t> indices,
                                             const model::FeatureBatch& features,
                                             const std::vector<model::TokenSeq>& samples,
                                             const std::vector<model::TokenSeq>& baselines);

}  // namespace dac::training
