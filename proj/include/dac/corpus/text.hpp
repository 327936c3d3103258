#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dac::corpus {

/// Lowercases ASCII letters, drops every character that is neither
/// alphanumeric nor whitespace, and collapses whitespace runs to one space.
/// The result has no leading or trailing space.
std::string normalize_text(std::string_view raw);

/// Splits on single spaces; expects normalized input.
std::vector<std::string> split_words(std::string_view text);

std::string join_words(const std::vector<std::string>& words);

}  // namespace dac::corpus
