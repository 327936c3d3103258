#pragma once

#include <cstddef>
#include <string>

#include "dac/training/inference.hpp"

namespace dac::cli {

/// JSON object {clip_id: [captions]} with keys in sorted order, indented, and
/// newline-terminated, so equal inputs give byte-identical files. Throws
/// InputError naming the clip when a clip does not have exactly
/// `per_clip` captions, or when the map is empty.
void write_captions(const training::GeneratedCaptions& captions, const std::string& path, std::size_t per_clip = 5);

/// Throws LoadError for unreadable or malformed files.
training::GeneratedCaptions read_captions(const std::string& path);

}  // namespace dac::cli
