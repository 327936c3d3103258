#include "dac/corpus/caption.hpp"

#include "dac/corpus/text.hpp"
#include "dac/errors.hpp"

namespace dac::corpus {

std::span<const TokenId> Caption::content() const {
  if (tokens.empty()) {
    return {};
  }
  const std::size_t begin = tokens.front() == Vocabulary::kStart ? 1 : 0;
  const std::size_t end = terminated() ? tokens.size() - 1 : tokens.size();
  if (end <= begin) {
    return {};
  }
  return std::span<const TokenId>(tokens).subspan(begin, end - begin);
}

Caption normalize_and_tokenize(std::string_view raw, const Vocabulary& vocab) {
  Caption caption;
  caption.text = normalize_text(raw);
  if (caption.text.empty()) {
    throw InputError("caption is empty after normalization: '" + std::string(raw) + "'");
  }
  caption.tokens.push_back(Vocabulary::kStart);
  for (const auto& word : split_words(caption.text)) {
    caption.tokens.push_back(vocab.id(word));
  }
  caption.tokens.push_back(Vocabulary::kEnd);
  return caption;
}

Caption caption_from_tokens(std::vector<TokenId> tokens, const Vocabulary& vocab) {
  if (tokens.empty() || tokens.front() != Vocabulary::kStart) {
    throw InputError("decoded token sequence must start with <sos>");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const bool last = i + 1 == tokens.size();
    if (tokens[i] == Vocabulary::kStart || (tokens[i] == Vocabulary::kEnd && !last)) {
      throw InputError("sentinel inside decoded token sequence");
    }
    vocab.token(tokens[i]);  // range check
  }
  Caption caption;
  caption.tokens = std::move(tokens);
  caption.text = join_words(caption_words(caption, vocab));
  return caption;
}

std::vector<std::string> caption_words(const Caption& caption, const Vocabulary& vocab) {
  std::vector<std::string> words;
  for (TokenId id : caption.content()) {
    words.push_back(vocab.token(id));
  }
  return words;
}

std::string detokenize(const Caption& caption, const Vocabulary& vocab) {
  return join_words(caption_words(caption, vocab));
}

}  // namespace dac::corpus
