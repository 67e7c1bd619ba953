#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dpgan::corpus {

using TokenSentence = std::vector<std::string>;

// Lowercases ASCII letters and splits on whitespace and punctuation.
// Punctuation becomes its own token except ' . , - between two alphanumerics
// ("don't", "3.5"). A sentence ends after . ! or ? when the next character is
// whitespace or the end of the input. Bytes >= 0x80 are word characters.
std::vector<TokenSentence> tokenize(std::string_view text);

// Space-joined tokens; sentences separated by a single space.
std::string detokenize(const std::vector<TokenSentence>& sentences);
std::string join_tokens(const TokenSentence& tokens);

// Number of tokens containing at least one alphanumeric character.
std::size_t word_count(const TokenSentence& tokens);

}  // namespace dpgan::corpus
