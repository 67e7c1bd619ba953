#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dpgan/corpus/types.hpp"
#include "dpgan/numerics/adagrad.hpp"
#include "dpgan/numerics/lstm.hpp"

namespace dpgan::disc {

using corpus::Sentence;
using corpus::Text;
using corpus::TokenId;

struct Dims {
  std::size_t vocab = 0;
  std::size_t embedding = 32;
  std::size_t hidden = 64;

  bool operator==(const Dims&) const = default;
};

// Unconditional word-level language model. Every sentence is scored from a
// fresh BOS state.
struct LmDiscriminator {
  Dims dims;
  num::Parameter embedding;  // {V, E}
  num::LstmCell cell;        // input E
  num::Parameter output;     // {V, H}
  num::Parameter output_bias;

  LmDiscriminator() = default;
  LmDiscriminator(Dims dims, std::uint64_t seed, double init_scale = 0.08);

  num::ParameterList parameters();
  num::ConstParameterList parameters() const;
};

// Sentence classifier: last hidden state -> linear -> sigmoid.
struct ClassifierDiscriminator {
  Dims dims;
  num::Parameter embedding;
  num::LstmCell cell;
  num::Parameter head;       // {1, H}
  num::Parameter head_bias;  // {1}

  ClassifierDiscriminator() = default;
  ClassifierDiscriminator(Dims dims, std::uint64_t seed, double init_scale = 0.08);

  num::ParameterList parameters();
  num::ConstParameterList parameters() const;
};

// ---- language-model discriminator ----

// log D(y_k | y_<k) for each word, recorded in g.
std::vector<num::Var> lm_word_log_probs(num::Graph& g, const LmDiscriminator& d, const Sentence& s);
// -log D(y_k | y_<k) per word.
std::vector<double> lm_word_rewards(const LmDiscriminator& d, const Sentence& s);
std::vector<std::vector<double>> lm_text_word_rewards(const LmDiscriminator& d, const Text& text);
// Mean word reward over every word of the text.
double lm_text_reward(const LmDiscriminator& d, const Text& text);
num::Var lm_text_reward(num::Graph& g, const LmDiscriminator& d, const Text& text);

// J = -(mean_real R(Y) - mean_gen R(Y)).
num::Var lm_discriminator_loss(num::Graph& g, const LmDiscriminator& d, std::span<const Text> real,
                               std::span<const Text> generated);
double lm_discriminator_loss_value(const LmDiscriminator& d, std::span<const Text> real,
                                   std::span<const Text> generated);

// Supplies the texts used at a given training step.
using TextSource = std::function<std::vector<Text>(std::size_t step)>;

// `steps` clipped Adagrad updates on J; returns the loss of every step.
std::vector<double> train_lm_discriminator(LmDiscriminator& d, const TextSource& real,
                                           const TextSource& generated, std::size_t steps,
                                           num::Adagrad& optimizer);
// One update on fixed texts; returns the loss before the update.
double lm_discriminator_step(LmDiscriminator& d, std::span<const Text> real,
                             std::span<const Text> generated, num::Adagrad& optimizer);

// ---- classifier discriminator ----

num::Var classifier_logit(num::Graph& g, const ClassifierDiscriminator& c, const Sentence& s);
// D(true | s), clamped strictly inside (0, 1).
double classifier_score(const ClassifierDiscriminator& c, const Sentence& s);
// Mean binary cross-entropy with real = 1, generated = 0.
num::Var classifier_loss(num::Graph& g, const ClassifierDiscriminator& c,
                         std::span<const Sentence> real, std::span<const Sentence> generated);
double classifier_accuracy(const ClassifierDiscriminator& c, std::span<const Sentence> real,
                           std::span<const Sentence> generated);

struct ClassifierTraining {
  std::vector<double> losses;
  double accuracy = 0.0;  // on the held-out sets, or the training sets if none given
};

// `steps` full-batch updates on the given sentences.
ClassifierTraining train_classifier(ClassifierDiscriminator& c, std::span<const Sentence> real,
                                    std::span<const Sentence> generated, std::size_t steps,
                                    num::Adagrad& optimizer,
                                    std::span<const Sentence> held_out_real = {},
                                    std::span<const Sentence> held_out_generated = {});

}  // namespace dpgan::disc
