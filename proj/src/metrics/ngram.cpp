#include "dac/metrics/ngram.hpp"

#include "dac/corpus/text.hpp"

namespace dac::metrics {

NGramCounts ngram_counts(const Sentence& sentence, int n) {
  NGramCounts counts;
  if (n <= 0 || sentence.size() < static_cast<std::size_t>(n)) {
    return counts;
  }
  const auto order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= sentence.size(); ++i) {
    ++counts[NGram(sentence.begin() + static_cast<std::ptrdiff_t>(i),
                   sentence.begin() + static_cast<std::ptrdiff_t>(i + order))];
  }
  return counts;
}

NGramProfile ngram_profile(const Sentence& sentence) {
  NGramProfile profile;
  profile.total_tokens = sentence.size();
  for (int n = 1; n <= kMaxOrder; ++n) {
    profile.counts[static_cast<std::size_t>(n - 1)] = ngram_counts(sentence, n);
  }
  return profile;
}

Sentence to_sentence(const std::string& text) { return corpus::split_words(text); }

}  // namespace dac::metrics
