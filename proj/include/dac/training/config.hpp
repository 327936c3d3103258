#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dac/discriminators/losses.hpp"
#include "dac/features/spec_augment.hpp"

namespace dac::training {

/// Which reward sources are active during adversarial training.
struct ComponentMask {
  bool naturalness = true;  // D_N
  bool semantic = true;     // D_S
  bool evaluator = true;    // L_E (CIDEr)

  /// Comma-separated subset of {nd, sd, le}; "all" enables everything.
  static ComponentMask parse(std::string_view text);
  std::string to_string() const;
  bool any_discriminator() const { return naturalness || semantic; }

  friend bool operator==(const ComponentMask&, const ComponentMask&) = default;
};

/// Which reference caption a clip contributes to an MLE epoch.
enum class ReferencePolicy { random, first };

struct TrainConfig {
  double lambda = 1.0;
  std::int64_t batch_size = 32;
  double learning_rate = 1e-4;       // generator, MLE
  double adv_learning_rate = 1e-4;   // generator, adversarial phase
  double disc_learning_rate = 1e-4;      // both discriminators, pretraining
  double adv_disc_learning_rate = 1e-4;  // both discriminators, adversarial phase
  std::int64_t mle_epochs = 15;
  std::int64_t baseline_epochs = 25;  // noise-free MLE baseline
  std::int64_t disc_pretrain_epochs = 3;
  std::int64_t adv_epochs = 25;
  ComponentMask components;
  std::uint64_t seed = 0;

  ReferencePolicy reference_policy = ReferencePolicy::random;
  std::int64_t unpaired_per_clip = 1;
  discriminators::SemanticCriterion semantic_criterion = discriminators::SemanticCriterion::mse;
  bool spec_augment = false;  // applied to MLE inputs only
  features::AugmentParams augment;
  bool select_on_validation = false;

  /// Smaller batches and a larger step size for the synthetic toy set.
  static TrainConfig toy();

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

/// Seed for one named phase, derived from the root seed so that phases do
/// not share random streams.
std::uint64_t phase_seed(std::uint64_t root, std::string_view phase);

}  // namespace dac::training
