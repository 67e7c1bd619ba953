#include "dpgan/rewards/rollout.hpp"

#include "dpgan/errors.hpp"

namespace dpgan::rewards {

double mcs_rollout_return(RolloutPolicy& policy, const SentenceScorer& score, const Sentence& prefix,
                          std::size_t n_rollouts, std::uint64_t seed) {
  if (n_rollouts == 0) throw ContractViolation("mcs: n_rollouts must be >= 1");
  if (policy.is_complete(prefix)) return score(prefix);
  num::Rng rng(seed);
  const auto completions = policy.sample_completions(prefix, n_rollouts, rng);
  // Running mean: exact when every completion scores the same.
  double mean = 0.0;
  std::size_t k = 0;
  for (const auto& s : completions) mean += (score(s) - mean) / static_cast<double>(++k);
  return mean;
}

std::vector<double> mcs_sentence_returns(RolloutPolicy& policy, const SentenceScorer& score,
                                         const Sentence& sentence, std::size_t n_rollouts,
                                         std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(sentence.size());
  Sentence prefix;
  for (std::size_t k = 0; k < sentence.size(); ++k) {
    prefix.push_back(sentence[k]);
    out.push_back(mcs_rollout_return(policy, score, prefix, n_rollouts, num::mix_seed(seed, {k + 1})));
  }
  return out;
}

namespace {

gen::Decoder sentence_start(num::Graph& g, const gen::GeneratorModel& m, const Sentence& source,
                            const Text& previous) {
  gen::Decoder d(g, m, source);
  for (const auto& s : previous) {
    d.begin_sentence();
    corpus::TokenId prev = corpus::special::kBos;
    for (auto w : s) {
      d.step(prev);
      prev = w;
    }
  }
  d.begin_sentence();
  return d;
}

}  // namespace

GeneratorRollout::GeneratorRollout(const gen::GeneratorModel& m, const Sentence& source,
                                   const Text& previous, std::size_t max_words, double temperature)
    : graph_(std::make_unique<num::Graph>()),
      start_(sentence_start(*graph_, m, source, previous)) {
  sampling_.max_words = max_words;
  sampling_.temperature = temperature;
  sampling_.mode = gen::DecodeMode::kSample;
  gen::validate(sampling_);
}

bool GeneratorRollout::is_complete(const Sentence& s) const {
  return !s.empty() && (corpus::is_terminal(s.back()) || s.size() >= sampling_.max_words);
}

std::vector<Sentence> GeneratorRollout::sample_completions(const Sentence& prefix, std::size_t n,
                                                           num::Rng& rng) {
  num::Graph g;
  gen::Decoder fed = start_.fork(g);
  num::Var logits = fed.step(corpus::special::kBos);
  for (auto w : prefix) logits = fed.step(w);
  const num::Tensor after_prefix = logits.value();

  std::vector<Sentence> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    Sentence s = prefix;
    if (is_complete(s)) {
      out.push_back(std::move(s));
      continue;
    }
    num::Graph h;
    gen::Decoder d = fed.fork(h);
    num::Tensor next = after_prefix;
    while (true) {
      const auto w = gen::choose_token(next.values(), sampling_, rng);
      s.push_back(w);
      if (is_complete(s)) break;
      next = d.step(w).value();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dpgan::rewards
