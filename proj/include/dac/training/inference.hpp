#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dac/corpus/audio_clip.hpp"
#include "dac/metrics/report.hpp"
#include "dac/model/generator.hpp"

namespace dac::training {

/// Test-time decoding. Default: num_samples greedy decodes per clip, each
/// with its own noise draw. Baseline: the num_samples best beam hypotheses
/// with zero noise.
struct GenerationOptions {
  std::int64_t num_samples = 5;
  bool baseline = false;
  std::int64_t beam_size = 5;
  std::uint64_t seed = 0;
};

/// clip id -> caption texts, in sample (or beam rank) order.
using GeneratedCaptions = std::map<std::string, std::vector<std::string>>;

GeneratedCaptions generate_captions(model::CaptionGeneratorImpl& generator,
                                    std::span<const corpus::AudioClip> clips, const corpus::Vocabulary& vocab,
                                    const GenerationOptions& options);

metrics::CaptionSets to_caption_sets(const GeneratedCaptions& captions);

/// Every clip's five references as sentences.
metrics::CaptionSets reference_sets(std::span<const corpus::AudioClip> clips);

}  // namespace dac::training
