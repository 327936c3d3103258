#pragma once

#include <string>
#include <vector>

namespace dac::features {

struct Waveform {
  int sample_rate = 0;
  std::vector<float> samples;  // mono, [-1, 1]
};

/// RIFF/WAVE reader for 16/24/32-bit PCM and 32-bit float. Multi-channel
/// input is averaged to mono. Throws LoadError on anything else.
Waveform read_wav(const std::string& path);

/// 16-bit PCM mono writer (used for fixtures).
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace dac::features
