#pragma once

// Independent recounts of the evaluation metrics, keyed by strings rather
// than id vectors and using products instead of log sums.

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dpgan/corpus/types.hpp"
#include "dpgan/numerics/random.hpp"

namespace oracle {

using dpgan::corpus::Sentence;

inline std::string gram_key(const Sentence& s, std::size_t i, std::size_t n) {
  std::string key;
  for (std::size_t j = i; j < i + n; ++j) key += std::to_string(s[j]) + "|";
  return key;
}

struct Counts {
  std::size_t tokens = 0, d1 = 0, d2 = 0, d3 = 0, ds = 0;
};

inline Counts recount(const std::vector<Sentence>& corpus) {
  std::unordered_set<std::string> g[3], whole;
  Counts c;
  for (const auto& s : corpus) {
    c.tokens += s.size();
    whole.insert(s.empty() ? std::string("<empty>") : gram_key(s, 0, s.size()));
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t i = 0; i + n <= s.size(); ++i) g[n - 1].insert(gram_key(s, i, n));
  }
  c.d1 = g[0].size();
  c.d2 = g[1].size();
  c.d3 = g[2].size();
  c.ds = whole.size();
  return c;
}

inline double bleu(const Sentence& cand, const std::vector<Sentence>& refs, std::size_t max_n, double eps) {
  if (cand.empty()) return 0.0;
  const std::size_t orders = std::min(max_n, cand.size());
  double product = 1.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    std::unordered_map<std::string, int> c;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) ++c[gram_key(cand, i, n)];
    int hit = 0, total = 0;
    for (const auto& [k, cnt] : c) {
      int best = 0;
      for (const auto& r : refs) {
        int here = 0;
        for (std::size_t i = 0; i + n <= r.size(); ++i) here += gram_key(r, i, n) == k;
        best = std::max(best, here);
      }
      hit += std::min(cnt, best);
      total += cnt;
    }
    product *= hit == 0 ? eps : double(hit) / double(total);
  }
  std::size_t best_len = refs[0].size();
  for (const auto& r : refs) {
    const long d = std::labs(long(r.size()) - long(cand.size()));
    const long bd = std::labs(long(best_len) - long(cand.size()));
    if (d < bd || (d == bd && r.size() < best_len)) best_len = r.size();
  }
  const double bp = cand.size() > best_len ? 1.0 : std::exp(1.0 - double(best_len) / double(cand.size()));
  return bp * std::pow(product, 1.0 / double(orders));
}

// Random toy corpus over a small alphabet, duplicates likely.
inline std::vector<Sentence> toy_corpus(dpgan::num::Rng& rng, std::size_t n, std::size_t vocab,
                                        std::size_t max_len) {
  std::vector<Sentence> out(n);
  for (auto& s : out) {
    s.resize(dpgan::num::uniform_index(rng, max_len + 1));
    for (auto& t : s) t = static_cast<int>(5 + dpgan::num::uniform_index(rng, vocab));
  }
  return out;
}

}  // namespace oracle
