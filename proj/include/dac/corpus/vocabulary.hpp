#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace dac::corpus {

using TokenId = std::int32_t;

/// Dense bidirectional token <-> id map. Ids 0..3 are the special tokens;
/// content tokens follow in descending training-corpus frequency (ties broken
/// alphabetically), so construction is deterministic for a fixed corpus.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kStart = 1;
  static constexpr TokenId kEnd = 2;
  static constexpr TokenId kUnknown = 3;
  static constexpr std::size_t kNumSpecials = 4;

  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kStartToken = "<sos>";
  static constexpr std::string_view kEndToken = "<eos>";
  static constexpr std::string_view kUnknownToken = "<unk>";

  Vocabulary();

  /// Builds from normalized caption strings; every whitespace-separated word
  /// becomes a content token and is counted.
  static Vocabulary build(std::span<const std::string> captions);

  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const { return id_to_token_.size(); }

  static bool is_special(TokenId id) { return id >= 0 && id < static_cast<TokenId>(kNumSpecials); }

  /// Training-corpus frequency; zero for unseen tokens and the specials.
  std::uint64_t count(std::string_view token) const;
  const std::map<std::string, std::uint64_t, std::less<>>& counts() const { return counts_; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  void add(const std::string& token);

  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
  std::map<std::string, std::uint64_t, std::less<>> counts_;
};

}  // namespace dac::corpus
