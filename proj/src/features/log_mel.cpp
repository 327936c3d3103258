#include "dac/features/log_mel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "dac/errors.hpp"

namespace dac::features {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

void MelParams::validate() const {
  if (sample_rate <= 0 || window <= 0 || hop <= 0) {
    throw InputError("mel parameters must be positive");
  }
  if (hop > window) {
    throw InputError("hop (" + std::to_string(hop) + ") exceeds window (" + std::to_string(window) + ")");
  }
  if (n_mels != static_cast<int>(corpus::kMelBins)) {
    throw InputError("n_mels must be " + std::to_string(corpus::kMelBins));
  }
  if (!(log_floor > 0.0)) {
    throw InputError("log floor must be positive");
  }
}

std::size_t frame_count(std::size_t samples, const MelParams& params) {
  const auto window = static_cast<std::size_t>(params.window);
  if (samples < window) {
    return 0;
  }
  return 1 + (samples - window) / static_cast<std::size_t>(params.hop);
}

std::vector<std::vector<double>> mel_filterbank(const MelParams& params) {
  const std::size_t n_bins = static_cast<std::size_t>(params.window) / 2 + 1;
  const double nyquist = params.sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(static_cast<std::size_t>(params.n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(edges.size() - 1));
  }
  std::vector<std::vector<double>> filters(static_cast<std::size_t>(params.n_mels),
                                           std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < filters.size(); ++m) {
    const double lo = edges[m];
    const double mid = edges[m + 1];
    const double hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * params.sample_rate / params.window;
      const double rising = (f - lo) / (mid - lo);
      const double falling = (hi - f) / (hi - mid);
      filters[m][k] = std::max(0.0, std::min(rising, falling));
    }
  }
  return filters;
}

struct LogMelExtractor::Plan {
  double* input = nullptr;
  fftw_complex* output = nullptr;
  fftw_plan plan = nullptr;

  explicit Plan(int n) {
    input = fftw_alloc_real(static_cast<std::size_t>(n));
    output = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan = fftw_plan_dft_r2c_1d(n, input, output, FFTW_ESTIMATE);
  }
  ~Plan() {
    fftw_destroy_plan(plan);
    fftw_free(output);
    fftw_free(input);
  }
};

LogMelExtractor::LogMelExtractor(const MelParams& params) : params_(params) {
  params_.validate();
  hann_.resize(static_cast<std::size_t>(params_.window));
  // periodic Hann, as used for STFT analysis
  for (std::size_t i = 0; i < hann_.size(); ++i) {
    hann_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(params_.window));
  }
  filters_ = mel_filterbank(params_);
  plan_ = std::make_unique<Plan>(params_.window);
}

LogMelExtractor::~LogMelExtractor() = default;

corpus::FeatureMatrix LogMelExtractor::operator()(std::span<const float> waveform) {
  const std::size_t frames = frame_count(waveform.size(), params_);
  if (frames == 0) {
    throw InputError("waveform of " + std::to_string(waveform.size()) +
                     " samples is shorter than one analysis window (" +
                     std::to_string(params_.window) + ")");
  }
  const auto window = static_cast<std::size_t>(params_.window);
  const auto hop = static_cast<std::size_t>(params_.hop);
  const std::size_t n_bins = window / 2 + 1;
  const double log_floor = std::log(params_.log_floor);
  std::vector<double> power(n_bins);
  corpus::FeatureMatrix out(frames, static_cast<std::size_t>(params_.n_mels));
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t offset = f * hop;
    for (std::size_t i = 0; i < window; ++i) {
      plan_->input[i] = static_cast<double>(waveform[offset + i]) * hann_[i];
    }
    fftw_execute(plan_->plan);
    for (std::size_t k = 0; k < n_bins; ++k) {
      power[k] = plan_->output[k][0] * plan_->output[k][0] + plan_->output[k][1] * plan_->output[k][1];
    }
    for (std::size_t m = 0; m < filters_.size(); ++m) {
      double energy = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) {
        energy += filters_[m][k] * power[k];
      }
      out.at(f, m) = static_cast<float>(energy > params_.log_floor ? std::log(energy) : log_floor);
    }
  }
  return out;
}

corpus::FeatureMatrix log_mel(std::span<const float> waveform, const MelParams& params) {
  LogMelExtractor extractor(params);
  return extractor(waveform);
}

}  // namespace dac::features
