#pragma once

#include <cstdint>
#include <vector>

namespace dpgan::corpus {

using TokenId = std::int32_t;
using Sentence = std::vector<TokenId>;
// A multi-sentence text. In model-facing texts every sentence carries its
// terminal marker (EOSent, or EOS for the closing sentence).
using Text = std::vector<Sentence>;

namespace special {
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kUnk = 1;
inline constexpr TokenId kBos = 2;
inline constexpr TokenId kEos = 3;
inline constexpr TokenId kEosent = 4;
inline constexpr TokenId kCount = 5;
}  // namespace special

inline bool is_terminal(TokenId id) { return id == special::kEos || id == special::kEosent; }

// Appends EOSent to every sentence and closes the text with a lone EOS sentence.
Text to_model_text(const Text& sentences);
// Inverse of to_model_text: drops markers and sentences left empty.
Text strip_markers(const Text& text);
std::size_t token_count(const Text& text);

}  // namespace dpgan::corpus
