#include "dac/metrics/corpus_stats.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace dac::metrics {

std::vector<CountRatio> ngram_count_ratios(std::span<const Sentence> train_captions,
                                           std::span<const Sentence> eval_captions, std::size_t train_size,
                                           std::size_t test_size) {
  if (train_size == 0 || test_size == 0) {
    throw std::invalid_argument("set sizes for count ratios must be positive");
  }
  const double scale = static_cast<double>(test_size) / static_cast<double>(train_size);
  std::vector<CountRatio> out;
  for (int n = 1; n <= 3; ++n) {
    NGramCounts train;
    NGramCounts eval;
    for (const auto& s : train_captions) {
      for (const auto& [gram, c] : ngram_counts(s, n)) {
        train[gram] += c;
      }
    }
    for (const auto& s : eval_captions) {
      for (const auto& [gram, c] : ngram_counts(s, n)) {
        eval[gram] += c;
      }
    }
    for (const auto& [gram, m] : train) {
      CountRatio r;
      r.ngram = gram;
      r.train_count = m;
      const auto it = eval.find(gram);
      r.eval_count = it == eval.end() ? 0 : it->second;
      r.expected = static_cast<double>(m) * scale;
      r.ratio = static_cast<double>(r.eval_count) / r.expected;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> vocab_by_threshold(std::span<const Sentence> captions,
                                                                    std::span<const std::size_t> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("thresholds must be sorted ascending");
  }
  std::map<std::string, std::size_t> freq;
  for (const auto& s : captions) {
    for (const auto& w : s) {
      ++freq[w];
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> curve;
  curve.reserve(thresholds.size());
  for (auto t : thresholds) {
    const auto count = static_cast<std::size_t>(
        std::count_if(freq.begin(), freq.end(), [t](const auto& kv) { return kv.second > t; }));
    curve.emplace_back(t, count);
  }
  return curve;
}

}  // namespace dac::metrics
