#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dac/corpus/audio_clip.hpp"

namespace dac::corpus {

inline constexpr std::size_t kToyClasses = 5;

struct ToyOptions {
  std::size_t frames = 64;
};

/// Synthetic corpus with learnable audio/caption semantics. Clip i belongs to
/// latent sound class i mod 5; its features carry that class's mel band
/// pattern plus noise, and its five captions come from a small weighted
/// grammar that always names the class word.
struct ToyDataset {
  std::vector<AudioClip> clips;
  std::vector<std::size_t> labels;
  std::vector<std::string> class_words;
};

/// Pure function of (seed, n_clips, options). Throws InputError for
/// n_clips < 2.
ToyDataset make_toy_dataset(std::uint64_t seed, std::size_t n_clips, const ToyOptions& options = {});

}  // namespace dac::corpus
