#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dac/corpus/feature_matrix.hpp"

namespace dac::features {

struct MelParams {
  int sample_rate = 44100;
  int window = 1024;  // Hann window length = FFT size
  int hop = 512;
  int n_mels = 64;
  double log_floor = 1e-10;

  /// Throws InputError for hop > window, n_mels != 64 or non-positive values.
  void validate() const;
};

/// Frame count for a waveform of `samples` samples (no padding).
std::size_t frame_count(std::size_t samples, const MelParams& params);

/// Triangular mel filterbank (HTK mel scale) spanning 0 Hz to Nyquist,
/// n_mels x (window/2 + 1), peak-normalized to 1.
std::vector<std::vector<double>> mel_filterbank(const MelParams& params);

/// Log-mel extractor that reuses its FFT plan and filterbank across calls.
/// Not safe to share between threads.
class LogMelExtractor {
 public:
  explicit LogMelExtractor(const MelParams& params = {});
  ~LogMelExtractor();
  LogMelExtractor(const LogMelExtractor&) = delete;
  LogMelExtractor& operator=(const LogMelExtractor&) = delete;

  /// frames x n_mels natural-log mel power; frames = 1 + (len - window) / hop.
  /// Throws InputError if the waveform is shorter than one window.
  corpus::FeatureMatrix operator()(std::span<const float> waveform);

  const MelParams& params() const { return params_; }

 private:
  struct Plan;
  MelParams params_;
  std::vector<double> hann_;
  std::vector<std::vector<double>> filters_;
  std::unique_ptr<Plan> plan_;
};

corpus::FeatureMatrix log_mel(std::span<const float> waveform, const MelParams& params = {});

}  // namespace dac::features
