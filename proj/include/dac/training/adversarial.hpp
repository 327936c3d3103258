#pragma once

#include <optional>
#include <vector>

#include "dac/discriminators/naturalness.hpp"
#include "dac/discriminators/semantic.hpp"
#include "dac/model/generator.hpp"
#include "dac/training/config.hpp"
#include "dac/training/dataset.hpp"
#include "dac/training/train_log.hpp"

namespace dac::training {

struct AdversarialEpoch {
  std::int64_t epoch = 0;
  double naturalness_loss = 0.0;
  double semantic_loss = 0.0;
  double generator_loss = 0.0;
  double mean_d_n = 0.0;
  double mean_d_s = 0.0;
  double mean_l_e = 0.0;
  double mean_reward = 0.0;
  double mean_baseline = 0.0;
  double mean_advantage = 0.0;
  std::optional<double> validation_cider;  // raw CIDEr-D of noise-greedy captions

  nlohmann::json to_json() const;
};

struct AdversarialResult {
  std::vector<AdversarialEpoch> epochs;
  std::int64_t discriminator_steps = 0;
  std::int64_t generator_steps = 0;
  std::optional<std::int64_t> selected_epoch;  // set when validation selection restored an earlier epoch
};

/// Alternating training for adv_epochs epochs. Per mini-batch: sample C_g
/// (with the generator's noise settings) and C_u; one D_N step and one D_S
/// step on the enabled discriminators; rewards of the samples and of greedy
/// baselines decoded with the same noise traces; one SCST step. Throws
/// TrainingError if the mean reward becomes non-finite. With a validation set
/// the validation CIDEr is logged per epoch, and with select_on_validation the
/// best epoch's generator is restored at the end.
AdversarialResult train_adversarial(model::CaptionGeneratorImpl& generator,
                                    discriminators::NaturalnessDiscriminatorImpl& naturalness,
                                    discriminators::SemanticDiscriminatorImpl& semantic, const TrainingSet& data,
                                    const TrainConfig& config, const TrainingSet* validation = nullptr,
                                    TrainLog* log = nullptr);

}  // namespace dac::training
