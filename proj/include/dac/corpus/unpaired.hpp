#pragma once

#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dac/corpus/audio_clip.hpp"

namespace dac::corpus {

/// A negative caption for a clip, drawn from another clip's references.
struct UnpairedCaption {
  std::size_t origin;     // index of the source clip within the batch
  std::size_t reference;  // index within the source clip's references
  std::string text;
};

/// For every clip, `per_clip` captions drawn uniformly (with replacement)
/// from the references of the other clips in the batch. Keyed by clip id;
/// throws InputError for batches with fewer than two clips or duplicate ids.
std::map<std::string, std::vector<UnpairedCaption>> sample_unpaired(
    std::span<const AudioClip* const> batch, std::mt19937_64& rng, std::size_t per_clip = 1);

}  // namespace dac::corpus
