#include "dpgan/corpus/tokenizer.hpp"

#include <cctype>

namespace dpgan::corpus {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }
bool is_joiner(char c) { return c == '\'' || c == '.' || c == ',' || c == '-'; }
bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<TokenSentence> tokenize(std::string_view text) {
  std::vector<TokenSentence> sentences;
  TokenSentence current;
  std::string word;

  auto flush_word = [&] {
    if (!word.empty()) current.push_back(std::move(word));
    word.clear();
  };
  auto flush_sentence = [&] {
    flush_word();
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    const bool has_next = i + 1 < text.size();
    const auto next = has_next ? static_cast<unsigned char>(text[i + 1]) : '\0';
    if (is_space(c)) {
      flush_word();
    } else if (is_word_char(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else if (is_joiner(static_cast<char>(c)) && !word.empty() &&
               is_word_char(static_cast<unsigned char>(word.back())) && has_next &&
               is_word_char(next)) {
      word.push_back(static_cast<char>(c));
    } else {
      flush_word();
      current.emplace_back(1, static_cast<char>(c));
      if (is_sentence_end(static_cast<char>(c)) && (!has_next || is_space(next))) flush_sentence();
    }
  }
  flush_sentence();
  return sentences;
}

std::string join_tokens(const TokenSentence& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string detokenize(const std::vector<TokenSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (s.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += join_tokens(s);
  }
  return out;
}

std::size_t word_count(const TokenSentence& tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens) {
    for (char c : t) {
      if (is_word_char(static_cast<unsigned char>(c))) {
        ++n;
        break;
      }
    }
  }
  return n;
}

}  // namespace dpgan::corpus
