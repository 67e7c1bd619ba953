#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "dpgan/generator/decoder.hpp"
#include "dpgan/generator/generate.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::rewards {

using corpus::Sentence;
using corpus::Text;

// Completes partial sentences by sampling.
class RolloutPolicy {
 public:
  virtual ~RolloutPolicy() = default;
  // Full sentences that start with `prefix`.
  virtual std::vector<Sentence> sample_completions(const Sentence& prefix, std::size_t n,
                                                   num::Rng& rng) = 0;
  virtual bool is_complete(const Sentence& s) const = 0;
};

using SentenceScorer = std::function<double(const Sentence&)>;

// Mean score over n completions of `prefix`; a complete prefix is scored directly.
double mcs_rollout_return(RolloutPolicy& policy, const SentenceScorer& score, const Sentence& prefix,
                          std::size_t n_rollouts, std::uint64_t seed);
// Estimates for every prefix y_{1..k}, k = 1..|sentence|. Prefix k draws from
// the stream mix_seed(seed, {k}).
std::vector<double> mcs_sentence_returns(RolloutPolicy& policy, const SentenceScorer& score,
                                         const Sentence& sentence, std::size_t n_rollouts,
                                         std::uint64_t seed);

// Rolls out sentence t of a text from the generator, conditioned on the source
// and the earlier sentences.
class GeneratorRollout : public RolloutPolicy {
 public:
  GeneratorRollout(const gen::GeneratorModel& m, const Sentence& source, const Text& previous,
                   std::size_t max_words, double temperature = 1.0);

  std::vector<Sentence> sample_completions(const Sentence& prefix, std::size_t n,
                                           num::Rng& rng) override;
  bool is_complete(const Sentence& s) const override;

 private:
  std::unique_ptr<num::Graph> graph_;
  gen::Decoder start_;
  gen::GenerationConfig sampling_;
};

}  // namespace dpgan::rewards
