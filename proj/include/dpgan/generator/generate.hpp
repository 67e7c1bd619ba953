#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpgan/corpus/batch.hpp"
#include "dpgan/generator/model.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::gen {

enum class DecodeMode { kGreedy, kSample };

struct GenerationConfig {
  std::size_t max_sentences = 6;  // T, counting the closing EOS sentence
  std::size_t max_words = 40;     // K
  DecodeMode mode = DecodeMode::kSample;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

void validate(const GenerationConfig& c);

using WordLogProbs = std::vector<std::vector<double>>;

struct Generated {
  Text text;              // model text, markers included
  WordLogProbs log_probs; // same shape as text, under the untempered model
};

// Picks the next word from logits: argmax or a tempered sample, never PAD or BOS.
TokenId choose_token(std::span<const double> logits, const GenerationConfig& c, num::Rng& rng);

// Decodes one text. Sentences end at EOSent or after max_words words; EOS ends
// the text. PAD and BOS are never emitted.
Generated generate(const GeneratorModel& m, const Sentence& source, const GenerationConfig& c);
Generated generate(const GeneratorModel& m, const Sentence& source, const GenerationConfig& c,
                   num::Rng& rng);

// log G(y_{t,k} | y_{t,<k}, earlier sentences, source) per word, recorded in g.
std::vector<std::vector<num::Var>> word_log_probs(num::Graph& g, const GeneratorModel& m,
                                                  const Sentence& source, const Text& text);
WordLogProbs log_prob_of(const GeneratorModel& m, const Sentence& source, const Text& text);

// Mean negative log-likelihood over the real target tokens of the batch.
num::Var mle_loss(num::Graph& g, const GeneratorModel& m, const corpus::Batch& batch);
double mle_loss_value(const GeneratorModel& m, const corpus::Batch& batch);

}  // namespace dpgan::gen
