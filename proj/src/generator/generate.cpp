#include "dpgan/generator/generate.hpp"

#include <cmath>

#include "dpgan/errors.hpp"
#include "dpgan/generator/decoder.hpp"
#include "dpgan/numerics/ops.hpp"

namespace dpgan::gen {

namespace sp = corpus::special;

void validate(const GenerationConfig& c) {
  if (c.max_words < 1) throw ValidationError("generation: max_words must be >= 1");
  if (!(c.temperature > 0.0)) throw ValidationError("generation: temperature must be positive");
}

namespace {

bool emittable(std::size_t id) { return id != static_cast<std::size_t>(sp::kPad) && id != static_cast<std::size_t>(sp::kBos); }

}  // namespace

TokenId choose_token(std::span<const double> logits, const GenerationConfig& c, num::Rng& rng) {
  if (c.mode == DecodeMode::kGreedy) {
    std::size_t best = logits.size();
    for (std::size_t i = 0; i < logits.size(); ++i) {
      if (emittable(i) && (best == logits.size() || logits[i] > logits[best])) best = i;
    }
    return static_cast<TokenId>(best);
  }
  std::vector<double> scaled(logits.begin(), logits.end());
  for (double& x : scaled) x /= c.temperature;
  std::vector<double> lsm(scaled.size());
  num::log_softmax_into(scaled, lsm);
  for (std::size_t i = 0; i < lsm.size(); ++i) lsm[i] = emittable(i) ? std::exp(lsm[i]) : 0.0;
  return static_cast<TokenId>(num::sample_categorical(rng, lsm));
}

Generated generate(const GeneratorModel& m, const Sentence& source, const GenerationConfig& c) {
  num::Rng rng(c.seed);
  return generate(m, source, c, rng);
}

Generated generate(const GeneratorModel& m, const Sentence& source, const GenerationConfig& c,
                   num::Rng& rng) {
  validate(c);
  Generated out;
  if (c.max_sentences == 0) return out;
  num::Graph g;
  Decoder dec(g, m, source);
  std::vector<double> lsm(m.dims.vocab);
  bool done = false;
  while (!done && out.text.size() < c.max_sentences) {
    dec.begin_sentence();
    Sentence s;
    std::vector<double> lp;
    TokenId prev = sp::kBos;
    while (s.size() < c.max_words) {
      const num::Var logits = dec.step(prev);
      const auto values = logits.value().values();
      const TokenId w = choose_token(values, c, rng);
      num::log_softmax_into(values, lsm);
      s.push_back(w);
      lp.push_back(lsm[static_cast<std::size_t>(w)]);
      prev = w;
      if (w == sp::kEos) done = true;
      if (corpus::is_terminal(w)) break;
    }
    out.text.push_back(std::move(s));
    out.log_probs.push_back(std::move(lp));
  }
  return out;
}

std::vector<std::vector<num::Var>> word_log_probs(num::Graph& g, const GeneratorModel& m,
                                                  const Sentence& source, const Text& text) {
  Decoder dec(g, m, source);
  std::vector<std::vector<num::Var>> out;
  out.reserve(text.size());
  for (const Sentence& s : text) {
    if (s.empty()) throw ContractViolation("log_prob_of: empty sentence");
    check_ids(m, s, "log_prob_of");
    dec.begin_sentence();
    std::vector<num::Var> row;
    TokenId prev = sp::kBos;
    for (TokenId w : s) {
      row.push_back(num::log_prob(dec.step(prev), w));
      prev = w;
    }
    out.push_back(std::move(row));
  }
  return out;
}

WordLogProbs log_prob_of(const GeneratorModel& m, const Sentence& source, const Text& text) {
  num::Graph g;
  const auto vars = word_log_probs(g, m, source, text);
  WordLogProbs out;
  for (const auto& row : vars) {
    std::vector<double> values;
    for (num::Var v : row) values.push_back(v.value().item());
    out.push_back(std::move(values));
  }
  return out;
}

num::Var mle_loss(num::Graph& g, const GeneratorModel& m, const corpus::Batch& batch) {
  const std::size_t tokens = batch.real_target_tokens();
  if (tokens == 0) throw ContractViolation("mle_loss: batch has no real target tokens");
  std::vector<num::Var> terms;
  terms.reserve(tokens);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Text target = batch.target_of(b);
    if (target.empty()) continue;
    for (const auto& row : word_log_probs(g, m, batch.source_of(b), target)) {
      terms.insert(terms.end(), row.begin(), row.end());
    }
  }
  const std::vector<double> weights(terms.size(), -1.0 / static_cast<double>(terms.size()));
  return num::weighted_sum(terms, weights);
}

double mle_loss_value(const GeneratorModel& m, const corpus::Batch& batch) {
  num::Graph g;
  return mle_loss(g, m, batch).value().item();
}

}  // namespace dpgan::gen
