#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dpgan/corpus/tokenizer.hpp"
#include "dpgan/corpus/types.hpp"

namespace dpgan::corpus {

// Bidirectional token <-> id table. Ids 0..4 are reserved, in order:
// PAD, UNK, BOS, EOS, EOSent.
class Vocabulary {
 public:
  static constexpr std::string_view kReservedTokens[] = {"<pad>", "<unk>", "<bos>", "<eos>",
                                                         "<eosent>"};

  Vocabulary();

  // Adds a token if absent; returns its id.
  TokenId add(std::string_view token);
  // Id of `token`, or UNK when it is not in the table.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  // Throws ContractViolation for ids outside the table.
  const std::string& token(TokenId id) const;

  std::size_t size() const noexcept { return tokens_.size(); }
  bool valid(TokenId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < tokens_.size();
  }

  Sentence encode(const TokenSentence& tokens) const;
  Text encode(const std::vector<TokenSentence>& sentences) const;
  // Markers are rendered by name except EOSent/EOS, which are skipped.
  TokenSentence decode(std::span<const TokenId> ids) const;

  // One token per line; line index (0-based) equals id, reserved block first.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

// Keeps the most frequent tokens so that the table holds at most `max_size`
// entries including the reserved block. Ties go to the earlier first
// occurrence. Throws ContractViolation if max_size is below the reserved count.
Vocabulary build_vocabulary(std::span<const TokenSentence> sentences, std::size_t max_size);

}  // namespace dpgan::corpus
