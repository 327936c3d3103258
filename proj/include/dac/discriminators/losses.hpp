#pragma once

#include <span>
#include <string>

#include <torch/torch.h>

namespace dac::discriminators {

/// Criterion for D_S: squared error (default) or cross-entropy against the
/// same 1/0 targets.
enum class SemanticCriterion { mse, bce };

SemanticCriterion parse_semantic_criterion(const std::string& text);
std::string to_string(SemanticCriterion criterion);

/// -mean log D_N(real) - mean log(1 - D_N(fake)). Both pools must be
/// nonempty. Probabilities are clamped to [1e-12, 1 - 1e-12] before the log.
double naturalness_loss(std::span<const double> real, std::span<const double> fake);
torch::Tensor naturalness_loss(const torch::Tensor& real, const torch::Tensor& fake);

/// mean (1 - D_S(paired))^2 + 0.5 mean D_S(unpaired)^2 + 0.5 mean D_S(generated)^2.
/// Empty negative pools drop their term (discriminator pretraining has no
/// generated captions).
double semantic_loss(std::span<const double> paired, std::span<const double> unpaired,
                     std::span<const double> generated, SemanticCriterion criterion = SemanticCriterion::mse);
torch::Tensor semantic_loss(const torch::Tensor& paired, const torch::Tensor& unpaired,
                            const torch::Tensor& generated, SemanticCriterion criterion = SemanticCriterion::mse);

}  // namespace dac::discriminators
