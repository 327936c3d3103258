#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "dac/corpus/audio_clip.hpp"
#include "dac/corpus/vocabulary.hpp"
#include "dac/metrics/cider.hpp"
#include "dac/model/batch.hpp"

namespace dac::training {

/// Clips with their tokenized references, the reference sentences used by
/// the in-loop CIDEr and the idf table of this corpus.
class TrainingSet {
 public:
  TrainingSet(std::vector<corpus::AudioClip> clips, corpus::Vocabulary vocab);

  std::size_t size() const { return clips_.size(); }
  const corpus::AudioClip& clip(std::size_t i) const { return clips_.at(i); }
  const std::vector<corpus::AudioClip>& clips() const { return clips_; }
  const corpus::Vocabulary& vocab() const { return vocab_; }
  const std::array<corpus::Caption, corpus::kRefsPerClip>& references(std::size_t i) const { return refs_.at(i); }
  const std::vector<metrics::Sentence>& reference_sentences(std::size_t i) const { return ref_sentences_.at(i); }
  const metrics::IdfTable& idf() const { return idf_; }

  model::FeatureBatch features(std::span<const std::size_t> indices) const;
  std::vector<const corpus::AudioClip*> clip_pointers(std::span<const std::size_t> indices) const;

 private:
  std::vector<corpus::AudioClip> clips_;
  corpus::Vocabulary vocab_;
  std::vector<std::array<corpus::Caption, corpus::kRefsPerClip>> refs_;
  std::vector<std::vector<metrics::Sentence>> ref_sentences_;
  metrics::IdfTable idf_;
};

/// Shuffled index batches covering 0..n-1 once; the last batch may be short.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::int64_t batch_size, std::mt19937_64& rng);

/// Words of a decoded token sequence (sentinels dropped).
metrics::Sentence token_sentence(std::span<const corpus::TokenId> tokens, const corpus::Vocabulary& vocab);

}  // namespace dac::training
