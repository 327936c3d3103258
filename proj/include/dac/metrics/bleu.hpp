#pragma once

#include <array>
#include <span>
#include <vector>

#include "dac/metrics/ngram.hpp"

namespace dac::metrics {

enum class Smoothing {
  none,
  // A higher order (n >= 2) with zero clipped matches uses (0 + 1) / (total + 1).
  add_one,
};

/// Sufficient statistics for BLEU: clipped matches and candidate n-gram
/// totals per order, candidate length and closest reference length.
struct BleuStats {
  std::array<std::size_t, kMaxOrder> matches{};
  std::array<std::size_t, kMaxOrder> totals{};
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;

  BleuStats& operator+=(const BleuStats& other);
};

/// Closest reference length breaks ties toward the shorter reference.
BleuStats bleu_stats(const Sentence& candidate, std::span<const Sentence> references, int max_n);

/// Geometric mean of clipped precisions of orders 1..n times the brevity
/// penalty, scaled to [0, 100]. Zero for an empty candidate.
double bleu_from_stats(const BleuStats& stats, int n, Smoothing smoothing);

/// Sentence-level BLEU_n (add-one smoothing by default).
double sentence_bleu(const Sentence& candidate, std::span<const Sentence> references, int n,
                     Smoothing smoothing = Smoothing::add_one);

/// Corpus-level BLEU_n over aligned candidates and reference sets; no smoothing.
double corpus_bleu(std::span<const Sentence> candidates, std::span<const std::vector<Sentence>> references,
                   int n);

}  // namespace dac::metrics
