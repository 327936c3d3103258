#include "dac/metrics/diversity.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "dac/metrics/bleu.hpp"

namespace dac::metrics {

double mbleu(std::span<const Sentence> captions, int n) {
  if (captions.size() < 2) {
    throw std::invalid_argument("mBLEU needs at least two captions");
  }
  double sum = 0.0;
  std::vector<Sentence> rest;
  for (std::size_t i = 0; i < captions.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < captions.size(); ++j) {
      if (j != i) {
        rest.push_back(captions[j]);
      }
    }
    sum += sentence_bleu(captions[i], rest, n, Smoothing::add_one);
  }
  return sum / static_cast<double>(captions.size());
}

double div_n(std::span<const Sentence> captions, int n) {
  std::set<NGram> distinct;
  std::size_t words = 0;
  for (const auto& caption : captions) {
    words += caption.size();
    for (const auto& entry : ngram_counts(caption, n)) {
      distinct.insert(entry.first);
    }
  }
  if (words == 0) {
    return 0.0;
  }
  return 100.0 * static_cast<double>(distinct.size()) / static_cast<double>(words);
}

std::size_t vocab_size(std::span<const Sentence> captions) {
  std::set<std::string> words;
  for (const auto& caption : captions) {
    words.insert(caption.begin(), caption.end());
  }
  return words.size();
}

}  // namespace dac::metrics
