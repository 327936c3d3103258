#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dac::corpus {

inline constexpr std::size_t kMelBins = 64;

/// Row-major frames x bins float matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t frames, std::size_t bins, float fill = 0.0F)
      : frames_(frames), bins_(bins), data_(frames * bins, fill) {}
  FeatureMatrix(std::size_t frames, std::size_t bins, std::vector<float> data);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  bool empty() const { return data_.empty(); }

  float& at(std::size_t frame, std::size_t bin) { return data_[frame * bins_ + bin]; }
  float at(std::size_t frame, std::size_t bin) const { return data_[frame * bins_ + bin]; }

  std::span<float> row(std::size_t frame) { return {data_.data() + frame * bins_, bins_}; }
  std::span<const float> row(std::size_t frame) const { return {data_.data() + frame * bins_, bins_}; }

  std::span<const float> values() const { return data_; }
  std::span<float> values() { return data_; }

  double mean() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<float> data_;
};

/// Throws InputError unless the matrix has 64 columns and at least one row.
void validate_features(const FeatureMatrix& features);

}  // namespace dac::corpus
