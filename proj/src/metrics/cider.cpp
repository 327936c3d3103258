#include "dac/metrics/cider.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dac::metrics {
namespace {

struct TfIdfVector {
  std::array<std::map<NGram, double>, kMaxOrder> values;
  std::array<double, kMaxOrder> norms{};
  double length = 0.0;  // number of bigrams, as in the reference CIDEr-D scorer
};

TfIdfVector vectorize(const Sentence& sentence, const IdfTable& idf) {
  TfIdfVector vec;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    for (const auto& [gram, tf] : ngram_counts(sentence, n)) {
      const double v = static_cast<double>(tf) * idf.weight(gram);
      vec.values[k][gram] = v;
      vec.norms[k] += v * v;
      if (n == 2) {
        vec.length += static_cast<double>(tf);
      }
    }
    vec.norms[k] = std::sqrt(vec.norms[k]);
  }
  return vec;
}

std::array<double, kMaxOrder> similarity(const TfIdfVector& hyp, const TfIdfVector& ref, double sigma) {
  const double delta = hyp.length - ref.length;
  const double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
  std::array<double, kMaxOrder> out{};
  for (std::size_t k = 0; k < kMaxOrder; ++k) {
    double dot = 0.0;
    for (const auto& [gram, h] : hyp.values[k]) {
      const auto it = ref.values[k].find(gram);
      if (it != ref.values[k].end()) {
        dot += std::min(h, it->second) * it->second;
      }
    }
    if (hyp.norms[k] != 0.0 && ref.norms[k] != 0.0) {
      dot /= hyp.norms[k] * ref.norms[k];
    }
    out[k] = dot * penalty;
  }
  return out;
}

}  // namespace

IdfTable IdfTable::from_references(std::span<const std::vector<Sentence>> documents) {
  if (documents.empty()) {
    throw std::invalid_argument("idf table needs at least one reference document");
  }
  IdfTable table;
  table.num_documents_ = documents.size();
  table.log_documents_ = std::log(static_cast<double>(documents.size()));
  for (const auto& doc : documents) {
    std::set<NGram> seen;
    for (const auto& sentence : doc) {
      for (int n = 1; n <= kMaxOrder; ++n) {
        for (const auto& entry : ngram_counts(sentence, n)) {
          seen.insert(entry.first);
        }
      }
    }
    for (const auto& gram : seen) {
      ++table.df_[gram];
    }
  }
  return table;
}

IdfTable IdfTable::uniform(double weight) {
  if (weight < 0.0) {
    throw std::invalid_argument("idf weight must be non-negative");
  }
  IdfTable table;
  table.uniform_ = weight;
  return table;
}

double IdfTable::weight(const NGram& gram) const {
  if (uniform_) {
    return *uniform_;
  }
  const double df = static_cast<double>(std::max<std::size_t>(1, document_frequency(gram)));
  return log_documents_ - std::log(df);
}

std::size_t IdfTable::document_frequency(const NGram& gram) const {
  const auto it = df_.find(gram);
  return it == df_.end() ? 0 : it->second;
}

double cider(const Sentence& candidate, std::span<const Sentence> references, const IdfTable& idf,
             double sigma) {
  if (references.empty()) {
    throw std::invalid_argument("CIDEr needs at least one reference");
  }
  const auto hyp = vectorize(candidate, idf);
  double total = 0.0;
  for (const auto& ref : references) {
    const auto sims = similarity(hyp, vectorize(ref, idf), sigma);
    double mean = 0.0;
    for (double s : sims) {
      mean += s;
    }
    total += mean / kMaxOrder;
  }
  return 10.0 * total / static_cast<double>(references.size());
}

}  // namespace dac::metrics
