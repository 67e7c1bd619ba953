#include "dpgan/corpus/dataset.hpp"

#include <cmath>
#include <sstream>

#include "dpgan/errors.hpp"
#include "dpgan/io.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::corpus {

Text to_model_text(const Text& sentences) {
  Text out;
  out.reserve(sentences.size() + 1);
  for (const auto& s : sentences) {
    Sentence m = s;
    m.push_back(special::kEosent);
    out.push_back(std::move(m));
  }
  out.push_back({special::kEos});
  return out;
}

Text strip_markers(const Text& text) {
  Text out;
  for (const auto& s : text) {
    Sentence content;
    for (TokenId t : s)
      if (!is_terminal(t)) content.push_back(t);
    if (!content.empty()) out.push_back(std::move(content));
  }
  return out;
}

std::size_t token_count(const Text& text) {
  std::size_t n = 0;
  for (const auto& s : text) n += s.size();
  return n;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "?";
}

std::optional<RawPair> split_review(const std::vector<TokenSentence>& sentences) {
  if (sentences.size() < 2) return std::nullopt;
  RawPair p;
  p.source = sentences.front();
  p.target.assign(sentences.begin() + 1, sentences.end());
  return p;
}

std::optional<RawPair> split_dialogue(const std::vector<TokenSentence>& context,
                                      const std::vector<TokenSentence>& response,
                                      std::size_t min_response_words) {
  RawPair p;
  for (const auto& s : context) p.source.insert(p.source.end(), s.begin(), s.end());
  std::size_t words = 0;
  for (const auto& s : response) words += word_count(s);
  if (p.source.empty() || response.empty()) return std::nullopt;
  if (min_response_words > 0 && words < min_response_words) return std::nullopt;
  p.target = response;
  return p;
}

TextPair encode_pair(const Vocabulary& vocab, const RawPair& raw) {
  TextPair p;
  p.source = vocab.encode(raw.source);
  p.target = vocab.encode(raw.target);
  return p;
}

std::array<std::vector<std::size_t>, 3> split_indices(std::size_t n, std::array<double, 3> ratios,
                                                      std::uint64_t seed) {
  double total = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw ValidationError("split ratios must be non-negative");
    total += r;
  }
  if (!(total > 0.0)) throw ValidationError("split ratios must not all be zero");
  num::Rng rng(num::mix_seed(seed, {0x5b1d}));
  const auto order = num::permutation(rng, n);
  const auto n_train = static_cast<std::size_t>(std::floor(ratios[0] / total * static_cast<double>(n)));
  const auto n_valid = std::min(
      n - n_train, static_cast<std::size_t>(std::floor(ratios[1] / total * static_cast<double>(n))));
  std::array<std::vector<std::size_t>, 3> out;
  out[0].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out[1].assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  out[2].assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  return out;
}

std::string format_pairs(const std::vector<RawPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += join_tokens(p.source);
    for (const auto& s : p.target) {
      out.push_back('\t');
      out += join_tokens(s);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<RawPair> parse_pairs(const std::string& content, const std::string& origin) {
  std::vector<RawPair> out;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  auto split_tokens = [](const std::string& field) {
    TokenSentence tokens;
    std::istringstream ss(field);
    std::string t;
    while (ss >> t) tokens.push_back(t);
    return tokens;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2) {
      throw IoError(origin + ":" + std::to_string(line_no) + ": expected source and target fields");
    }
    RawPair p;
    p.source = split_tokens(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) p.target.push_back(split_tokens(fields[i]));
    bool empty = p.source.empty();
    for (const auto& s : p.target) empty = empty || s.empty();
    if (empty) throw IoError(origin + ":" + std::to_string(line_no) + ": empty source or sentence");
    out.push_back(std::move(p));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const Vocabulary& vocab, Split split) {
  Dataset d;
  d.split = split;
  for (const auto& raw : parse_pairs(io::read_file(path), path.string())) {
    d.pairs.push_back(encode_pair(vocab, raw));
  }
  return d;
}

}  // namespace dpgan::corpus
