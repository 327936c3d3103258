#pragma once

#include <random>

#include "dac/corpus/feature_matrix.hpp"

namespace dac::features {

/// Time and frequency masking. Each mask has a width drawn uniformly from
/// [0, max width] (exactly the max width when `fixed_width` is set), clamped
/// to the axis length, and a uniformly placed start.
struct AugmentParams {
  int n_time_masks = 2;
  int max_time_width = 64;  // frames
  int n_freq_masks = 2;
  int max_freq_width = 8;  // mel bins
  bool fixed_width = false;

  /// Throws InputError for negative counts or widths.
  void validate() const;
};

/// Masked cells are set to the mean of the input matrix; all other cells are
/// copied unchanged.
corpus::FeatureMatrix spec_augment(const corpus::FeatureMatrix& features, const AugmentParams& params,
                                   std::mt19937_64& rng);

}  // namespace dac::features
