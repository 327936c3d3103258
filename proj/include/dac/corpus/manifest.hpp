#pragma once

#include <string>
#include <vector>

#include "dac/corpus/audio_clip.hpp"

namespace dac::corpus {

// Manifest format: JSON Lines, one object per clip
//   {"clip_id": "...", "features": "features/x.npy", "captions": ["...", x5]}
// Feature paths are resolved relative to the manifest's directory. Captions
// are normalized on load.

/// Throws LoadError naming the manifest line for malformed records, missing
/// feature files and caption counts other than five.
std::vector<AudioClip> load_manifest(const std::string& path);

/// Writes clips and their feature files; feature files go to
/// `<manifest dir>/<feature_subdir>/<clip_id>.npy`.
void write_manifest(const std::string& path, const std::vector<AudioClip>& clips,
                    const std::string& feature_subdir = "features");

}  // namespace dac::corpus
