#include "dpgan/corpus/synth.hpp"

#include <cmath>

#include "dpgan/errors.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::corpus {

namespace {

void check_distribution(const std::vector<double>& row, std::size_t expected, const std::string& what) {
  if (row.size() != expected) {
    throw ValidationError(what + ": expected " + std::to_string(expected) + " entries, got " +
                          std::to_string(row.size()));
  }
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) throw ValidationError(what + ": negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError(what + ": probabilities sum to " + std::to_string(total));
  }
}

Sentence sample_sentence(const MarkovChain& chain, const std::vector<TokenId>& ids,
                         std::size_t max_len, num::Rng& rng) {
  Sentence s;
  std::size_t state = num::sample_categorical(rng, chain.initial);
  const std::size_t end = chain.states.size();
  while (true) {
    s.push_back(ids[state]);
    if (s.size() >= max_len) break;
    const std::size_t next = num::sample_categorical(rng, chain.transitions[state]);
    if (next == end) break;
    state = next;
  }
  return s;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.modes.empty()) throw ValidationError("synthetic spec defines no modes");
  for (const auto& m : spec.modes) {
    const std::string where = "mode '" + m.name + "'";
    const auto& c = m.chain;
    if (c.states.empty()) throw ValidationError(where + ": chain has no states");
    if (!(m.weight > 0.0)) throw ValidationError(where + ": weight must be positive");
    if (m.min_target_sentences < 1 || m.max_target_sentences < m.min_target_sentences) {
      throw ValidationError(where + ": invalid target sentence range");
    }
    if (m.max_sentence_length < 1) throw ValidationError(where + ": max_sentence_length must be >= 1");
    check_distribution(c.initial, c.states.size(), where + " initial distribution");
    if (c.transitions.size() != c.states.size()) {
      throw ValidationError(where + ": one transition row per state required");
    }
    for (std::size_t i = 0; i < c.transitions.size(); ++i) {
      check_distribution(c.transitions[i], c.states.size() + 1,
                         where + " transition row " + std::to_string(i));
    }
  }
}

SyntheticCorpus synth_corpus(const SynthSpec& spec, std::size_t n_pairs, std::uint64_t seed) {
  validate(spec);
  SyntheticCorpus out;
  std::vector<std::vector<TokenId>> ids(spec.modes.size());
  std::vector<double> weights;
  for (std::size_t m = 0; m < spec.modes.size(); ++m) {
    for (const auto& s : spec.modes[m].chain.states) ids[m].push_back(out.vocabulary.add(s));
    weights.push_back(spec.modes[m].weight);
  }
  num::Rng rng(num::mix_seed(seed, {0x5e7}));
  out.dataset.pairs.reserve(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const std::size_t m = num::sample_categorical(rng, weights);
    const auto& mode = spec.modes[m];
    TextPair p;
    p.mode = static_cast<int>(m);
    p.source = sample_sentence(mode.chain, ids[m], mode.max_sentence_length, rng);
    const std::size_t span = mode.max_target_sentences - mode.min_target_sentences + 1;
    const std::size_t count = mode.min_target_sentences + num::uniform_index(rng, span);
    for (std::size_t k = 0; k < count; ++k) {
      p.target.push_back(sample_sentence(mode.chain, ids[m], mode.max_sentence_length, rng));
    }
    out.dataset.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace dpgan::corpus
