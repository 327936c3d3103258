#include "dac/discriminators/losses.hpp"

#include <algorithm>
#include <cmath>

#include "dac/errors.hpp"
#include "dac/model/batch.hpp"

namespace dac::discriminators {
namespace {

constexpr double kClamp = 1e-12;

double clamp_prob(double p) { return std::clamp(p, kClamp, 1.0 - kClamp); }

template <typename F>
double mean_of(std::span<const double> values, F f) {
  double sum = 0.0;
  for (double v : values) {
    sum += f(v);
  }
  return sum / static_cast<double>(values.size());
}

bool has_values(const torch::Tensor& t) { return t.defined() && t.numel() > 0; }

torch::Tensor positive_term(const torch::Tensor& p, SemanticCriterion criterion) {
  if (criterion == SemanticCriterion::mse) {
    return (1.0 - p).pow(2).mean();
  }
  return -p.clamp(kClamp, 1.0 - kClamp).log().mean();
}

torch::Tensor negative_term(const torch::Tensor& p, SemanticCriterion criterion) {
  if (criterion == SemanticCriterion::mse) {
    return p.pow(2).mean();
  }
  return -(1.0 - p.clamp(kClamp, 1.0 - kClamp)).log().mean();
}

}  // namespace

SemanticCriterion parse_semantic_criterion(const std::string& text) {
  if (text == "mse") {
    return SemanticCriterion::mse;
  }
  if (text == "bce") {
    return SemanticCriterion::bce;
  }
  throw ConfigError("semantic criterion must be 'mse' or 'bce', got '" + text + "'");
}

std::string to_string(SemanticCriterion criterion) { return criterion == SemanticCriterion::mse ? "mse" : "bce"; }

double naturalness_loss(std::span<const double> real, std::span<const double> fake) {
  if (real.empty() || fake.empty()) {
    throw InputError("naturalness loss needs real and generated captions");
  }
  return mean_of(real, [](double p) { return -std::log(clamp_prob(p)); }) +
         mean_of(fake, [](double p) { return -std::log(1.0 - clamp_prob(p)); });
}

torch::Tensor naturalness_loss(const torch::Tensor& real, const torch::Tensor& fake) {
  if (!has_values(real) || !has_values(fake)) {
    throw InputError("naturalness loss needs real and generated captions");
  }
  return -real.clamp(kClamp, 1.0 - kClamp).log().mean() - (1.0 - fake.clamp(kClamp, 1.0 - kClamp)).log().mean();
}

double semantic_loss(std::span<const double> paired, std::span<const double> unpaired,
                     std::span<const double> generated, SemanticCriterion criterion) {
  if (paired.empty()) {
    throw InputError("semantic loss needs paired captions");
  }
  const bool mse = criterion == SemanticCriterion::mse;
  auto pos = [mse](double p) { return mse ? (1.0 - p) * (1.0 - p) : -std::log(clamp_prob(p)); };
  auto neg = [mse](double p) { return mse ? p * p : -std::log(1.0 - clamp_prob(p)); };
  double loss = mean_of(paired, pos);
  if (!unpaired.empty()) {
    loss += 0.5 * mean_of(unpaired, neg);
  }
  if (!generated.empty()) {
    loss += 0.5 * mean_of(generated, neg);
  }
  return loss;
}

torch::Tensor semantic_loss(const torch::Tensor& paired, const torch::Tensor& unpaired,
                            const torch::Tensor& generated, SemanticCriterion criterion) {
  if (!has_values(paired)) {
    throw InputError("semantic loss needs paired captions");
  }
  auto loss = positive_term(paired, criterion);
  if (has_values(unpaired)) {
    loss = loss + 0.5 * negative_term(unpaired, criterion);
  }
  if (has_values(generated)) {
    loss = loss + 0.5 * negative_term(generated, criterion);
  }
  return loss;
}

}  // namespace dac::discriminators
