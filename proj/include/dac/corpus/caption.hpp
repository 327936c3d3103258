#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dac/corpus/vocabulary.hpp"

namespace dac::corpus {

/// Token ids bracketed by <sos> ... <eos>, plus the normalized text. A caption
/// cut off by a decoding length cap has no trailing <eos>; terminated() tells
/// the two apart.
struct Caption {
  std::vector<TokenId> tokens;
  std::string text;

  bool terminated() const { return tokens.size() >= 2 && tokens.back() == Vocabulary::kEnd; }

  /// Tokens between the sentinels.
  std::span<const TokenId> content() const;

  /// Number of content tokens.
  std::size_t length() const { return content().size(); }

  friend bool operator==(const Caption&, const Caption&) = default;
};

/// Normalizes `raw`, maps words to ids (unknown id for out-of-vocabulary
/// words) and attaches the sentinels. Throws InputError if nothing is left
/// after normalization.
Caption normalize_and_tokenize(std::string_view raw, const Vocabulary& vocab);

/// Builds a caption from decoder output (leading <sos>, optional <eos>).
Caption caption_from_tokens(std::vector<TokenId> tokens, const Vocabulary& vocab);

/// Content tokens as surface words.
std::vector<std::string> caption_words(const Caption& caption, const Vocabulary& vocab);

std::string detokenize(const Caption& caption, const Vocabulary& vocab);

}  // namespace dac::corpus
