#pragma once

#include <span>

#include "dac/metrics/ngram.hpp"

namespace dac::metrics {

/// Mutual BLEU_n: mean sentence BLEU_n (add-one smoothed) of each caption
/// against the rest of the set. Lower is more diverse. Throws
/// std::invalid_argument for sets of fewer than two captions.
double mbleu(std::span<const Sentence> captions, int n = 4);

/// 100 * distinct n-grams / total words across the set. Zero for a set with
/// no words.
double div_n(std::span<const Sentence> captions, int n);

/// Number of distinct words.
std::size_t vocab_size(std::span<const Sentence> captions);

}  // namespace dac::metrics
