#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dac/metrics/ngram.hpp"

namespace dac::metrics {

/// Inverse document frequencies of n-grams (orders 1..4) over a reference
/// corpus where one document is one clip's reference set:
///   weight(g) = log(N_docs) - log(max(1, df(g)))
/// Immutable once built.
class IdfTable {
 public:
  static IdfTable from_references(std::span<const std::vector<Sentence>> documents);

  /// Every n-gram gets the same weight.
  static IdfTable uniform(double weight = 1.0);

  double weight(const NGram& gram) const;
  std::size_t document_frequency(const NGram& gram) const;
  std::size_t num_documents() const { return num_documents_; }

 private:
  std::map<NGram, std::size_t> df_;
  std::size_t num_documents_ = 0;
  double log_documents_ = 0.0;
  std::optional<double> uniform_;
};

inline constexpr double kCiderSigma = 6.0;

/// CIDEr-D of one candidate: per order, the mean over references of the
/// clipped TF-IDF cosine times exp(-delta^2 / (2 sigma^2)) (delta = bigram
/// count difference), averaged over orders 1..4 and multiplied by 10.
/// Reported tables use 100x this value.
double cider(const Sentence& candidate, std::span<const Sentence> references, const IdfTable& idf,
             double sigma = kCiderSigma);

}  // namespace dac::metrics
