#include "dac/features/spec_augment.hpp"

#include <algorithm>

#include "dac/errors.hpp"

namespace dac::features {

void AugmentParams::validate() const {
  if (n_time_masks < 0 || n_freq_masks < 0 || max_time_width < 0 || max_freq_width < 0) {
    throw InputError("SpecAugment counts and widths must be non-negative");
  }
}

corpus::FeatureMatrix spec_augment(const corpus::FeatureMatrix& features, const AugmentParams& params,
                                   std::mt19937_64& rng) {
  params.validate();
  if (features.empty()) {
    throw InputError("cannot augment an empty feature matrix");
  }
  corpus::FeatureMatrix out = features;
  const auto fill = static_cast<float>(features.mean());

  auto draw_band = [&](int max_width, std::size_t axis) -> std::pair<std::size_t, std::size_t> {
    const auto cap = std::min<std::size_t>(static_cast<std::size_t>(max_width), axis);
    std::size_t width = cap;
    if (!params.fixed_width) {
      width = std::uniform_int_distribution<std::size_t>(0, cap)(rng);
    }
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, axis - width)(rng);
    return {start, width};
  };

  for (int m = 0; m < params.n_time_masks; ++m) {
    const auto [start, width] = draw_band(params.max_time_width, features.frames());
    for (std::size_t t = start; t < start + width; ++t) {
      std::fill(out.row(t).begin(), out.row(t).end(), fill);
    }
  }
  for (int m = 0; m < params.n_freq_masks; ++m) {
    const auto [start, width] = draw_band(params.max_freq_width, features.bins());
    for (std::size_t t = 0; t < features.frames(); ++t) {
      for (std::size_t b = start; b < start + width; ++b) {
        out.at(t, b) = fill;
      }
    }
  }
  return out;
}

}  // namespace dac::features
