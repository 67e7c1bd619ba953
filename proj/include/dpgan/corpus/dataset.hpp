#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dpgan/corpus/tokenizer.hpp"
#include "dpgan/corpus/types.hpp"
#include "dpgan/corpus/vocabulary.hpp"

namespace dpgan::corpus {

// Source sentence plus multi-sentence target, both without markers.
struct TextPair {
  Sentence source;
  Text target;
  int mode = -1;  // originating synthetic mode, -1 for real data

  friend bool operator==(const TextPair&, const TextPair&) = default;
};

enum class Split { train, valid, test };
const char* split_name(Split s);

struct Dataset {
  Split split = Split::train;
  std::vector<TextPair> pairs;

  bool empty() const noexcept { return pairs.empty(); }
  std::size_t size() const noexcept { return pairs.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Tokenised pair before vocabulary encoding.
struct RawPair {
  TokenSentence source;
  std::vector<TokenSentence> target;
};

// First sentence becomes the source, the rest the target. Documents with fewer
// than two sentences yield nullopt.
std::optional<RawPair> split_review(const std::vector<TokenSentence>& sentences);

// Dialogue turn: context sentences (the two preceding utterances) become the
// source, the response the target. With min_response_words > 0, responses
// with fewer words are skipped.
std::optional<RawPair> split_dialogue(const std::vector<TokenSentence>& context,
                                      const std::vector<TokenSentence>& response,
                                      std::size_t min_response_words);

TextPair encode_pair(const Vocabulary& vocab, const RawPair& raw);

// Deterministic shuffle under `seed`, then consecutive train/valid/test slices
// sized by `ratios` (normalised). Every item lands in exactly one split.
std::array<std::vector<std::size_t>, 3> split_indices(std::size_t n, std::array<double, 3> ratios,
                                                      std::uint64_t seed);

// One pair per line: source tokens, then one TAB-separated field per target
// sentence; tokens are space-separated.
std::string format_pairs(const std::vector<RawPair>& pairs);
std::vector<RawPair> parse_pairs(const std::string& content, const std::string& origin);
Dataset load_dataset(const std::filesystem::path& path, const Vocabulary& vocab, Split split);

}  // namespace dpgan::corpus
