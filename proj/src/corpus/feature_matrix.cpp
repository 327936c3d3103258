#include "dac/corpus/feature_matrix.hpp"

#include <numeric>
#include <string>

#include "dac/errors.hpp"

namespace dac::corpus {

FeatureMatrix::FeatureMatrix(std::size_t frames, std::size_t bins, std::vector<float> data)
    : frames_(frames), bins_(bins), data_(std::move(data)) {
  if (data_.size() != frames_ * bins_) {
    throw InputError("feature data has " + std::to_string(data_.size()) + " values, expected " +
                     std::to_string(frames_ * bins_));
  }
}

double FeatureMatrix::mean() const {
  if (data_.empty()) {
    return 0.0;
  }
  const double sum = std::accumulate(data_.begin(), data_.end(), 0.0);
  return sum / static_cast<double>(data_.size());
}

void validate_features(const FeatureMatrix& features) {
  if (features.bins() != kMelBins) {
    throw InputError("feature matrix has " + std::to_string(features.bins()) +
                     " columns, expected " + std::to_string(kMelBins));
  }
  if (features.frames() == 0) {
    throw InputError("feature matrix has no frames");
  }
}

}  // namespace dac::corpus
