#include "dac/corpus/toy_dataset.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "dac/errors.hpp"

namespace dac::corpus {
namespace {

struct SoundClass {
  const char* word;
  std::array<const char*, 3> verbs;
  std::size_t band_start;
  double period;
};

constexpr std::array<SoundClass, kToyClasses> kClasses = {{
    {"dog", {"barks", "is barking", "barks loudly"}, 4, 4.0},
    {"bird", {"chirps", "is singing", "sings softly"}, 16, 6.0},
    {"engine", {"hums", "is running", "idles roughly"}, 28, 8.0},
    {"bell", {"rings", "is ringing", "chimes twice"}, 40, 10.0},
    {"rain", {"falls", "is falling", "pours down"}, 52, 12.0},
}};
constexpr std::size_t kBandWidth = 8;

constexpr std::array<const char*, 4> kSubjects = {"a", "the", "a distant", "a loud"};
constexpr std::array<double, 4> kSubjectWeights = {0.45, 0.30, 0.15, 0.10};
constexpr std::array<double, 3> kVerbWeights = {0.5, 0.3, 0.2};
constexpr std::array<const char*, 5> kTails = {"in the background", "near the house",
                                               "outside the house", "for a while",
                                               "while people talk nearby"};
constexpr std::array<double, 5> kTailWeights = {0.40, 0.25, 0.15, 0.12, 0.08};

template <std::size_t N>
std::size_t pick(std::mt19937_64& rng, const std::array<double, N>& weights) {
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  return dist(rng);
}

std::string make_caption(std::mt19937_64& rng, const SoundClass& cls) {
  std::string caption = kSubjects[pick(rng, kSubjectWeights)];
  caption += ' ';
  caption += cls.word;
  caption += ' ';
  caption += cls.verbs[pick(rng, kVerbWeights)];
  caption += ' ';
  caption += kTails[pick(rng, kTailWeights)];
  return caption;
}

FeatureMatrix make_features(std::mt19937_64& rng, const SoundClass& cls, std::size_t frames) {
  std::normal_distribution<double> noise(0.0, 0.5);
  std::uniform_real_distribution<double> gain(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double clip_gain = gain(rng);
  const double clip_phase = phase(rng);
  FeatureMatrix features(frames, kMelBins);
  for (std::size_t t = 0; t < frames; ++t) {
    const double modulation =
        std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / cls.period + clip_phase);
    for (std::size_t b = 0; b < kMelBins; ++b) {
      double value = -5.0 + clip_gain + noise(rng);
      if (b >= cls.band_start && b < cls.band_start + kBandWidth) {
        value += 3.0 + modulation;
      }
      features.at(t, b) = static_cast<float>(value);
    }
  }
  return features;
}

}  // namespace

ToyDataset make_toy_dataset(std::uint64_t seed, std::size_t n_clips, const ToyOptions& options) {
  if (n_clips < 2) {
    throw InputError("toy dataset needs at least 2 clips (unpaired sampling draws from other clips)");
  }
  if (options.frames < 16) {
    throw InputError("toy clips need at least 16 frames to survive encoder pooling");
  }
  std::mt19937_64 rng(seed);
  ToyDataset data;
  for (const auto& cls : kClasses) {
    data.class_words.emplace_back(cls.word);
  }
  for (std::size_t i = 0; i < n_clips; ++i) {
    const std::size_t label = i % kToyClasses;
    const auto& cls = kClasses[label];
    AudioClip clip;
    char id[32];
    std::snprintf(id, sizeof id, "toy_%04zu", i);
    clip.clip_id = id;
    clip.features = make_features(rng, cls, options.frames);
    for (auto& caption : clip.captions) {
      caption = make_caption(rng, cls);
    }
    data.labels.push_back(label);
    data.clips.push_back(std::move(clip));
  }
  return data;
}

}  // namespace dac::corpus
