#pragma once

#include <array>
#include <string>
#include <vector>

#include "dac/corpus/caption.hpp"
#include "dac/corpus/feature_matrix.hpp"

namespace dac::corpus {

inline constexpr std::size_t kRefsPerClip = 5;

/// One audio item with its log-mel features and five normalized reference
/// captions.
struct AudioClip {
  std::string clip_id;
  FeatureMatrix features;
  std::array<std::string, kRefsPerClip> captions;

  std::array<Caption, kRefsPerClip> references(const Vocabulary& vocab) const;
};

/// Every reference caption of every clip, in clip order.
std::vector<std::string> all_captions(const std::vector<AudioClip>& clips);

}  // namespace dac::corpus
