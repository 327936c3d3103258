#include "dac/corpus/vocabulary.hpp"

#include <algorithm>
#include <fstream>

#include "dac/corpus/text.hpp"
#include "dac/errors.hpp"

namespace dac::corpus {

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kStartToken));
  add(std::string(kEndToken));
  add(std::string(kUnknownToken));
}

void Vocabulary::add(const std::string& token) {
  const auto id = static_cast<TokenId>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(token);
}

Vocabulary Vocabulary::build(std::span<const std::string> captions) {
  Vocabulary vocab;
  for (const auto& caption : captions) {
    for (auto& word : split_words(caption)) {
      ++vocab.counts_[word];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> ordered(vocab.counts_.begin(),
                                                             vocab.counts_.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [word, count] : ordered) {
    if (vocab.token_to_id_.count(word) == 0) {
      vocab.add(word);
    }
  }
  return vocab;
}

TokenId Vocabulary::id(std::string_view token) const {
  const auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnknown : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary of size " +
                            std::to_string(id_to_token_.size()));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::count(std::string_view token) const {
  const auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [word, n] : counts_) {
    counts[word] = n;
  }
  return {{"tokens", id_to_token_}, {"counts", counts}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  const auto tokens = j.at("tokens").get<std::vector<std::string>>();
  if (tokens.size() < kNumSpecials || tokens[kPad] != kPadToken || tokens[kStart] != kStartToken ||
      tokens[kEnd] != kEndToken || tokens[kUnknown] != kUnknownToken) {
    throw LoadError("vocabulary does not start with the four special tokens");
  }
  Vocabulary vocab;
  for (std::size_t i = kNumSpecials; i < tokens.size(); ++i) {
    if (vocab.token_to_id_.count(tokens[i]) != 0) {
      throw LoadError("duplicate vocabulary token '" + tokens[i] + "'");
    }
    vocab.add(tokens[i]);
  }
  for (const auto& [word, n] : j.at("counts").items()) {
    vocab.counts_[word] = n.get<std::uint64_t>();
  }
  return vocab;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw LoadError("cannot write vocabulary to " + path);
  }
  out << to_json().dump(1) << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open vocabulary file " + path);
  }
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("malformed vocabulary file " + path + ": " + e.what());
  }
}

}  // namespace dac::corpus
