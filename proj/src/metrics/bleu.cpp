#include "dac/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace dac::metrics {
namespace {

void check_order(int n) {
  if (n < 1 || n > kMaxOrder) {
    throw std::invalid_argument("BLEU order must be in [1, 4], got " + std::to_string(n));
  }
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t k = 0; k < kMaxOrder; ++k) {
    matches[k] += other.matches[k];
    totals[k] += other.totals[k];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

BleuStats bleu_stats(const Sentence& candidate, std::span<const Sentence> references, int max_n) {
  check_order(max_n);
  if (references.empty()) {
    throw std::invalid_argument("BLEU needs at least one reference");
  }
  BleuStats stats;
  stats.candidate_length = candidate.size();

  std::size_t closest = references.front().size();
  for (const auto& ref : references) {
    const auto diff = std::abs(static_cast<long>(ref.size()) - static_cast<long>(candidate.size()));
    const auto best = std::abs(static_cast<long>(closest) - static_cast<long>(candidate.size()));
    if (diff < best || (diff == best && ref.size() < closest)) {
      closest = ref.size();
    }
  }
  stats.reference_length = closest;

  for (int n = 1; n <= max_n; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    NGramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : ngram_counts(ref, n)) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    for (const auto& [gram, count] : ngram_counts(candidate, n)) {
      stats.totals[k] += count;
      const auto it = max_ref.find(gram);
      if (it != max_ref.end()) {
        stats.matches[k] += std::min(count, it->second);
      }
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats, int n, Smoothing smoothing) {
  check_order(n);
  if (stats.candidate_length == 0) {
    return 0.0;
  }
  double log_sum = 0.0;
  for (int order = 1; order <= n; ++order) {
    const auto k = static_cast<std::size_t>(order - 1);
    double matches = static_cast<double>(stats.matches[k]);
    double total = static_cast<double>(stats.totals[k]);
    if (smoothing == Smoothing::add_one && order >= 2 && stats.matches[k] == 0) {
      matches += 1.0;
      total += 1.0;
    }
    if (matches == 0.0 || total == 0.0) {
      return 0.0;
    }
    log_sum += std::log(matches / total);
  }
  const double c = static_cast<double>(stats.candidate_length);
  const double r = static_cast<double>(stats.reference_length);
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * brevity * std::exp(log_sum / n);
}

double sentence_bleu(const Sentence& candidate, std::span<const Sentence> references, int n,
                     Smoothing smoothing) {
  return bleu_from_stats(bleu_stats(candidate, references, n), n, smoothing);
}

double corpus_bleu(std::span<const Sentence> candidates, std::span<const std::vector<Sentence>> references,
                   int n) {
  if (candidates.size() != references.size()) {
    throw std::invalid_argument("corpus BLEU needs one reference set per candidate");
  }
  BleuStats total;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    total += bleu_stats(candidates[i], references[i], n);
  }
  return bleu_from_stats(total, n, Smoothing::none);
}

}  // namespace dac::metrics
