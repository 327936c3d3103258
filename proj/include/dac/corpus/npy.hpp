#pragma once

#include <string>

#include "dac/corpus/feature_matrix.hpp"

namespace dac::corpus {

// Feature container: NumPy .npy v1.0, little-endian float32, C order, 2-D
// (frames, bins). Readable with numpy.load().
void write_npy(const std::string& path, const FeatureMatrix& features);
FeatureMatrix read_npy(const std::string& path);

}  // namespace dac::corpus
