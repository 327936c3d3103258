#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dac/metrics/ngram.hpp"

namespace dac::metrics {

struct CountRatio {
  NGram ngram;
  std::size_t train_count = 0;
  std::size_t eval_count = 0;
  double expected = 0.0;  // train_count * test_size / train_size
  double ratio = 0.0;     // eval_count / expected
};

/// For every uni-, bi- and tri-gram seen in the training captions, the ratio
/// of its frequency in `eval_captions` to the frequency expected from the
/// training set. Ordered by n, then n-gram. Sizes must be positive.
std::vector<CountRatio> ngram_count_ratios(std::span<const Sentence> train_captions,
                                           std::span<const Sentence> eval_captions, std::size_t train_size,
                                           std::size_t test_size);

/// (t, number of words occurring more than t times) for each threshold.
/// Thresholds must be ascending; the curve is non-increasing.
std::vector<std::pair<std::size_t, std::size_t>> vocab_by_threshold(std::span<const Sentence> captions,
                                                                    std::span<const std::size_t> thresholds);

}  // namespace dac::metrics
