#include "dpgan/discriminators/discriminators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpgan/errors.hpp"
#include "dpgan/numerics/ops.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::disc {

namespace sp = corpus::special;

namespace {

void check_dims(const Dims& d, const char* who) {
  if (d.vocab <= static_cast<std::size_t>(sp::kCount) || d.embedding == 0 || d.hidden == 0) {
    throw ContractViolation(std::string(who) + ": vocab must exceed the reserved ids and dims must be positive");
  }
}

void check_sentence(const Dims& d, const Sentence& s, const char* who) {
  if (s.empty()) throw ContractViolation(std::string(who) + ": empty sentence");
  for (TokenId id : s) {
    if (id < 0 || static_cast<std::size_t>(id) >= d.vocab) {
      throw ContractViolation(std::string(who) + ": token id " + std::to_string(id) +
                              " outside vocabulary of size " + std::to_string(d.vocab));
    }
  }
}

num::ConstParameterList to_const(const num::ParameterList& list) { return {list.begin(), list.end()}; }

double apply(num::Graph& g, num::Var loss, const num::ParameterList& params, num::Adagrad& opt) {
  num::GradientBuffer grads(params);
  grads.accumulate(g.backward(loss));
  opt.step(params, grads);
  return loss.value().item();
}

}  // namespace

LmDiscriminator::LmDiscriminator(Dims d, std::uint64_t seed, double init_scale) : dims(d) {
  check_dims(d, "lm discriminator");
  num::Rng rng(num::mix_seed(seed, {0x1a}));
  embedding = {"lm.embedding", num::uniform_tensor({d.vocab, d.embedding}, init_scale, rng)};
  cell = num::LstmCell("lm.cell", d.embedding, d.hidden, init_scale, rng);
  output = {"lm.output", num::uniform_tensor({d.vocab, d.hidden}, init_scale, rng)};
  output_bias = {"lm.output_bias", num::uniform_tensor({d.vocab}, init_scale, rng)};
}

num::ParameterList LmDiscriminator::parameters() {
  return {&embedding, &cell.weight, &cell.bias, &output, &output_bias};
}

num::ConstParameterList LmDiscriminator::parameters() const {
  return to_const(const_cast<LmDiscriminator*>(this)->parameters());
}

ClassifierDiscriminator::ClassifierDiscriminator(Dims d, std::uint64_t seed, double init_scale)
    : dims(d) {
  check_dims(d, "classifier");
  num::Rng rng(num::mix_seed(seed, {0xc1}));
  embedding = {"cls.embedding", num::uniform_tensor({d.vocab, d.embedding}, init_scale, rng)};
  cell = num::LstmCell("cls.cell", d.embedding, d.hidden, init_scale, rng);
  head = {"cls.head", num::uniform_tensor({1, d.hidden}, init_scale, rng)};
  head_bias = {"cls.head_bias", num::uniform_tensor({1}, init_scale, rng)};
}

num::ParameterList ClassifierDiscriminator::parameters() {
  return {&embedding, &cell.weight, &cell.bias, &head, &head_bias};
}

num::ConstParameterList ClassifierDiscriminator::parameters() const {
  return to_const(const_cast<ClassifierDiscriminator*>(this)->parameters());
}

std::vector<num::Var> lm_word_log_probs(num::Graph& g, const LmDiscriminator& d, const Sentence& s) {
  check_sentence(d.dims, s, "lm discriminator");
  num::Var table = g.param(d.embedding);
  num::LstmState state = d.cell.zero_state(g);
  std::vector<num::Var> out;
  out.reserve(s.size());
  TokenId prev = sp::kBos;
  for (TokenId w : s) {
    state = d.cell.step(g, num::embedding(table, prev), state);
    num::Var logits = num::add(num::matmul(g.param(d.output), state.h), g.param(d.output_bias));
    out.push_back(num::log_prob(logits, w));
    prev = w;
  }
  return out;
}

std::vector<double> lm_word_rewards(const LmDiscriminator& d, const Sentence& s) {
  num::Graph g;
  std::vector<double> out;
  for (num::Var lp : lm_word_log_probs(g, d, s)) out.push_back(-lp.value().item());
  return out;
}

std::vector<std::vector<double>> lm_text_word_rewards(const LmDiscriminator& d, const Text& text) {
  std::vector<std::vector<double>> out;
  out.reserve(text.size());
  for (const auto& s : text) out.push_back(lm_word_rewards(d, s));
  return out;
}

double lm_text_reward(const LmDiscriminator& d, const Text& text) {
  num::Graph g;
  return lm_text_reward(g, d, text).value().item();
}

num::Var lm_text_reward(num::Graph& g, const LmDiscriminator& d, const Text& text) {
  if (text.empty()) throw ContractViolation("lm_text_reward: empty text");
  std::vector<num::Var> terms;
  for (const auto& s : text) {
    const auto lps = lm_word_log_probs(g, d, s);
    terms.insert(terms.end(), lps.begin(), lps.end());
  }
  const std::vector<double> w(terms.size(), -1.0 / static_cast<double>(terms.size()));
  return num::weighted_sum(terms, w);
}

num::Var lm_discriminator_loss(num::Graph& g, const LmDiscriminator& d, std::span<const Text> real,
                               std::span<const Text> generated) {
  if (real.empty() || generated.empty()) {
    throw ContractViolation("lm_discriminator_loss: empty batch");
  }
  std::vector<num::Var> rewards;
  std::vector<double> weights;
  for (const auto& t : real) {
    rewards.push_back(lm_text_reward(g, d, t));
    weights.push_back(-1.0 / static_cast<double>(real.size()));
  }
  for (const auto& t : generated) {
    rewards.push_back(lm_text_reward(g, d, t));
    weights.push_back(1.0 / static_cast<double>(generated.size()));
  }
  return num::weighted_sum(rewards, weights);
}

double lm_discriminator_loss_value(const LmDiscriminator& d, std::span<const Text> real,
                                   std::span<const Text> generated) {
  num::Graph g;
  return lm_discriminator_loss(g, d, real, generated).value().item();
}

double lm_discriminator_step(LmDiscriminator& d, std::span<const Text> real,
                             std::span<const Text> generated, num::Adagrad& optimizer) {
  num::Graph g;
  return apply(g, lm_discriminator_loss(g, d, real, generated), d.parameters(), optimizer);
}

std::vector<double> train_lm_discriminator(LmDiscriminator& d, const TextSource& real,
                                           const TextSource& generated, std::size_t steps,
                                           num::Adagrad& optimizer) {
  std::vector<double> trace;
  trace.reserve(steps);
  for (std::size_t step = 0; step < steps; ++step) {
    const auto r = real(step);
    const auto f = generated(step);
    trace.push_back(lm_discriminator_step(d, r, f, optimizer));
  }
  return trace;
}

num::Var classifier_logit(num::Graph& g, const ClassifierDiscriminator& c, const Sentence& s) {
  check_sentence(c.dims, s, "classifier");
  num::Var table = g.param(c.embedding);
  num::LstmState state = c.cell.zero_state(g);
  for (TokenId w : s) state = c.cell.step(g, num::embedding(table, w), state);
  return num::add(num::matmul(g.param(c.head), state.h), g.param(c.head_bias));
}

double classifier_score(const ClassifierDiscriminator& c, const Sentence& s) {
  num::Graph g;
  const double z = classifier_logit(g, c, s).value()[0];
  const double p = 1.0 / (1.0 + std::exp(-z));
  constexpr double kLow = 1e-15;
  constexpr double kHigh = 1.0 - 1e-15;
  return std::clamp(p, kLow, kHigh);
}

num::Var classifier_loss(num::Graph& g, const ClassifierDiscriminator& c,
                         std::span<const Sentence> real, std::span<const Sentence> generated) {
  const std::size_t n = real.size() + generated.size();
  if (n == 0) throw ContractViolation("classifier_loss: no samples");
  std::vector<num::Var> terms;
  terms.reserve(n);
  for (const auto& s : real) terms.push_back(num::sum(num::log_sigmoid(classifier_logit(g, c, s))));
  for (const auto& s : generated) {
    terms.push_back(num::sum(num::log_sigmoid(num::scale(classifier_logit(g, c, s), -1.0))));
  }
  const std::vector<double> w(n, -1.0 / static_cast<double>(n));
  return num::weighted_sum(terms, w);
}

double classifier_accuracy(const ClassifierDiscriminator& c, std::span<const Sentence> real,
                           std::span<const Sentence> generated) {
  const std::size_t n = real.size() + generated.size();
  if (n == 0) throw ContractViolation("classifier_accuracy: no samples");
  std::size_t correct = 0;
  for (const auto& s : real) correct += classifier_score(c, s) > 0.5;
  for (const auto& s : generated) correct += classifier_score(c, s) < 0.5;
  return static_cast<double>(correct) / static_cast<double>(n);
}

ClassifierTraining train_classifier(ClassifierDiscriminator& c, std::span<const Sentence> real,
                                    std::span<const Sentence> generated, std::size_t steps,
                                    num::Adagrad& optimizer,
                                    std::span<const Sentence> held_out_real,
                                    std::span<const Sentence> held_out_generated) {
  ClassifierTraining out;
  const auto params = c.parameters();
  for (std::size_t step = 0; step < steps; ++step) {
    num::Graph g;
    out.losses.push_back(apply(g, classifier_loss(g, c, real, generated), params, optimizer));
  }
  const bool held = !held_out_real.empty() || !held_out_generated.empty();
  out.accuracy = held ? classifier_accuracy(c, held_out_real, held_out_generated)
                      : classifier_accuracy(c, real, generated);
  return out;
}

}  // namespace dpgan::disc
