#include "dac/training/dataset.hpp"

#include <algorithm>
#include <numeric>

#include "dac/errors.hpp"

namespace dac::training {

TrainingSet::TrainingSet(std::vector<corpus::AudioClip> clips, corpus::Vocabulary vocab)
    : clips_(std::move(clips)), vocab_(std::move(vocab)) {
  if (clips_.empty()) {
    throw InputError("training set is empty");
  }
  for (const auto& clip : clips_) {
    refs_.push_back(clip.references(vocab_));
    std::vector<metrics::Sentence> sentences;
    for (const auto& c : refs_.back()) {
      sentences.push_back(token_sentence(c.tokens, vocab_));
    }
    ref_sentences_.push_back(std::move(sentences));
  }
  idf_ = metrics::IdfTable::from_references(ref_sentences_);
}

model::FeatureBatch TrainingSet::features(std::span<const std::size_t> indices) const {
  std::vector<const corpus::FeatureMatrix*> mats;
  for (auto i : indices) {
    mats.push_back(&clips_.at(i).features);
  }
  return model::make_feature_batch(mats);
}

std::vector<const corpus::AudioClip*> TrainingSet::clip_pointers(std::span<const std::size_t> indices) const {
  std::vector<const corpus::AudioClip*> out;
  for (auto i : indices) {
    out.push_back(&clips_.at(i));
  }
  return out;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::int64_t batch_size, std::mt19937_64& rng) {
  if (batch_size < 1) {
    throw InputError("batch size must be >= 1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> batches;
  const auto size = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < n; start += size) {
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + size)));
  }
  return batches;
}

metrics::Sentence token_sentence(std::span<const corpus::TokenId> tokens, const corpus::Vocabulary& vocab) {
  metrics::Sentence out;
  for (auto id : tokens) {
    if (!corpus::Vocabulary::is_special(id)) {
      out.push_back(vocab.token(id));
    } else if (id == corpus::Vocabulary::kUnknown) {
      out.emplace_back(corpus::Vocabulary::kUnknownToken);
    }
  }
  return out;
}

}  // namespace dac::training
