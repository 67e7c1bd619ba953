#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpgan/corpus/dataset.hpp"
#include "dpgan/corpus/vocabulary.hpp"

namespace dpgan::corpus {

// First-order Markov chain over a small token set. Each transition row has one
// entry per state plus a final entry for ending the sentence.
struct MarkovChain {
  std::vector<std::string> states;
  std::vector<double> initial;
  std::vector<std::vector<double>> transitions;
};

struct SynthMode {
  std::string name;
  double weight = 1.0;
  MarkovChain chain;
  std::size_t min_target_sentences = 1;
  std::size_t max_target_sentences = 1;
  std::size_t max_sentence_length = 20;
};

struct SynthSpec {
  std::vector<SynthMode> modes;
};

struct SyntheticCorpus {
  Vocabulary vocabulary;  // reserved block, then every mode's states in declaration order
  Dataset dataset;        // pairs tagged with their mode index
};

// Throws ValidationError for rows or initial distributions that do not sum to
// one within 1e-9, negative entries, or empty/malformed modes.
void validate(const SynthSpec& spec);

// Each pair picks a mode by weight, then samples 1 + S sentences from that
// mode's chain (S uniform in [min, max]); the first is the source.
// Deterministic under `seed`.
SyntheticCorpus synth_corpus(const SynthSpec& spec, std::size_t n_pairs, std::uint64_t seed);

}  // namespace dpgan::corpus
