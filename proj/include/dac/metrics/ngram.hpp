#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace dac::metrics {

using Sentence = std::vector<std::string>;
using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

inline constexpr int kMaxOrder = 4;

/// Contiguous n-grams of `sentence` with multiplicities; empty when the
/// sentence is shorter than n.
NGramCounts ngram_counts(const Sentence& sentence, int n);

/// Orders 1..4 of a sentence. counts[n-1] sums to max(0, T - n + 1).
struct NGramProfile {
  std::array<NGramCounts, kMaxOrder> counts;
  std::size_t total_tokens = 0;
};

NGramProfile ngram_profile(const Sentence& sentence);

/// Splits a normalized caption string into words.
Sentence to_sentence(const std::string& text);

}  // namespace dac::metrics
