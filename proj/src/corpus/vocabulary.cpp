#include "dpgan/corpus/vocabulary.hpp"

#include <algorithm>
#include <fstream>

#include "dpgan/io.hpp"
#include "dpgan/errors.hpp"

namespace dpgan::corpus {

Vocabulary::Vocabulary() {
  for (auto t : kReservedTokens) add(t);
}

TokenId Vocabulary::add(std::string_view token) {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? special::kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (!valid(id)) throw ContractViolation("vocabulary: invalid id " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

Sentence Vocabulary::encode(const TokenSentence& tokens) const {
  Sentence out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

Text Vocabulary::encode(const std::vector<TokenSentence>& sentences) const {
  Text out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(encode(s));
  return out;
}

TokenSentence Vocabulary::decode(std::span<const TokenId> ids) const {
  TokenSentence out;
  for (TokenId id : ids) {
    if (is_terminal(id)) continue;
    out.push_back(token(id));
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::string content;
  for (const auto& t : tokens_) content += t + "\n";
  io::write_file_atomic(path, content);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read vocabulary file " + path.string());
  Vocabulary v;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (n < special::kCount) {
      if (line != kReservedTokens[n]) {
        throw IoError(path.string() + ":" + std::to_string(n + 1) + ": expected reserved token " +
                      std::string(kReservedTokens[n]));
      }
    } else {
      if (line.empty() || v.contains(line)) {
        throw IoError(path.string() + ":" + std::to_string(n + 1) + ": empty or duplicate token");
      }
      v.add(line);
    }
    ++n;
  }
  if (n < special::kCount) throw IoError(path.string() + ": truncated reserved block");
  return v;
}

Vocabulary build_vocabulary(std::span<const TokenSentence> sentences, std::size_t max_size) {
  if (max_size < special::kCount) {
    throw ContractViolation("build_vocabulary: max_size " + std::to_string(max_size) +
                            " is below the " + std::to_string(special::kCount) + " reserved ids");
  }
  struct Entry {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Entry> stats;
  std::vector<std::string> order;
  std::size_t position = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      auto [it, inserted] = stats.try_emplace(t, Entry{0, position});
      if (inserted) order.push_back(t);
      ++it->second.count;
      ++position;
    }
  }
  Vocabulary base;
  std::erase_if(order, [&](const std::string& t) { return base.contains(t); });
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return stats[a].count > stats[b].count;
  });
  const std::size_t keep = std::min(order.size(), max_size - special::kCount);
  Vocabulary v;
  for (std::size_t i = 0; i < keep; ++i) v.add(order[i]);
  return v;
}

}  // namespace dpgan::corpus
