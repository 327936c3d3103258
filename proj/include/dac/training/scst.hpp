#pragma once

#include <span>
#include <vector>

#include <torch/torch.h>

#include "dac/model/decoding.hpp"

namespace dac::training {

struct ScstStats {
  double loss = 0.0;
  double mean_advantage = 0.0;
  bool stepped = false;  // false when every advantage was zero
};

/// Policy-gradient loss -mean_b (advantage_b * sum_t log pi(w_t | f(x), z_t, w_<t))
/// re-evaluated by teacher forcing with each sample's own noise trace.
torch::Tensor scst_loss(model::CaptionGeneratorImpl& generator, const model::FeatureBatch& features,
                        const std::vector<model::SampledCaption>& samples, std::span<const double> advantages);

/// One optimizer step on scst_loss. The forward pass runs in eval mode so
/// batch-norm statistics are not updated by the policy step. When every
/// advantage is exactly zero the step is skipped: the gradient is zero, but
/// Adam's moment state would still move the weights.
ScstStats scst_update(model::CaptionGeneratorImpl& generator, torch::optim::Optimizer& optimizer,
                      const model::FeatureBatch& features, const std::vector<model::SampledCaption>& samples,
                      std::span<const double> advantages);

}  // namespace dac::training
