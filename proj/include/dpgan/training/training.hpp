#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpgan/corpus/batch.hpp"
#include "dpgan/discriminators/discriminators.hpp"
#include "dpgan/generator/generate.hpp"
#include "dpgan/numerics/adagrad.hpp"
#include "dpgan/rewards/rewards.hpp"
#include "dpgan/training/run_log.hpp"

namespace dpgan::train {

using corpus::Sentence;
using corpus::Text;
using rewards::Grid;

enum class Baseline { kNone, kMle, kPgBleu, kSeqGan };

std::string baseline_name(Baseline b);
Baseline parse_baseline(const std::string& s);

struct TrainConfig {
  std::size_t iterations = 10;           // N
  std::size_t generator_steps = 1;       // M
  std::size_t discriminator_steps = 5;   // K_steps
  std::size_t batch_size = 16;
  std::size_t pretrain_generator_epochs = 2;
  std::size_t pretrain_discriminator_epochs = 1;
  double gamma = 1.0;
  rewards::RewardMode mode = rewards::RewardMode::kSW;
  Baseline baseline = Baseline::kNone;
  bool teacher_forcing = true;
  bool reward_baseline = false;  // subtract the batch-mean policy weight
  std::size_t rollouts = 16;     // SeqGAN Monte Carlo rollouts per prefix
  double bleu_epsilon = 1e-9;
  std::size_t bleu_max_n = 4;
  bool log_timings = false;
  num::AdagradConfig optimizer;
  gen::GenerationConfig generation;
  std::uint64_t seed = 1;

  void validate() const;
};

// Every trainable model with its optimizer.
struct Models {
  gen::GeneratorModel generator;
  num::Adagrad generator_opt;
  disc::LmDiscriminator lm;
  num::Adagrad lm_opt;
  disc::ClassifierDiscriminator classifier;
  num::Adagrad classifier_opt;
};

Models make_models(std::size_t vocab, std::size_t embedding, std::size_t hidden, const TrainConfig& c,
                   double init_scale = 0.08);

// How far a run has progressed; everything else is derived from the seed.
struct Progress {
  std::size_t generator_epochs = 0;
  std::size_t discriminator_epochs = 0;
  std::size_t iterations = 0;
  std::size_t step = 0;  // records written so far

  bool operator==(const Progress&) const = default;
};

// ---- sampling helpers ----

// Sample b draws from the stream mix_seed(seed, {b}).
std::vector<Text> sample_texts(const gen::GeneratorModel& g, std::span<const Sentence> sources,
                               const gen::GenerationConfig& c, std::uint64_t seed);
// Sentences of a model text, without a closing lone-EOS sentence.
std::vector<Sentence> content_sentences(const Text& t);
std::vector<Sentence> content_sentences(std::span<const Text> texts);

// Token-weighted mean negative log-likelihood of the dataset's targets.
double corpus_nll(const gen::GeneratorModel& g, const corpus::Dataset& data);

// ---- generator updates ----

// -(1/B) sum_b sum_{t,k} weights[b][t][k] * log G(y_{t,k}).
num::Var surrogate_loss(num::Graph& g, const gen::GeneratorModel& m, std::span<const Sentence> sources,
                        std::span<const Text> texts, std::span<const Grid> weights);
// One clipped Adagrad step on the surrogate; returns the loss before the step.
double apply_policy_gradient(gen::GeneratorModel& m, num::Adagrad& opt, std::span<const Sentence> sources,
                             std::span<const Text> texts, std::span<const Grid> weights);

// gamma^(k-1) R_{t,k} for each bundle, with the optional batch-mean baseline.
std::vector<Grid> weights_from(const std::vector<rewards::RewardBundle>& bundles, const TrainConfig& c);

struct StepResult {
  double loss = 0.0;
  double mean_reward = 0.0;  // mean R(Y) of the texts used
  bool skipped = false;
  std::vector<Text> texts;
  std::vector<rewards::RewardBundle> bundles;
};

double mle_step(gen::GeneratorModel& g, num::Adagrad& opt, const corpus::Batch& batch);

StepResult policy_gradient_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::LmDiscriminator& d,
                                const corpus::Batch& sources, const TrainConfig& c, std::uint64_t seed);
StepResult teacher_forcing_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::LmDiscriminator& d,
                                const corpus::Batch& real, const TrainConfig& c);
StepResult pg_bleu_step(gen::GeneratorModel& g, num::Adagrad& opt, const corpus::Batch& paired,
                        const TrainConfig& c, std::uint64_t seed);
StepResult seqgan_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::ClassifierDiscriminator& cls,
                       const corpus::Batch& sources, const TrainConfig& c, std::uint64_t seed);

// BLEU of the sample's words against the reference's words (markers stripped).
double text_bleu(const Text& sample, const Text& reference, std::size_t max_n, double eps);

// ---- discriminator updates ----

struct DiscStepResult {
  double loss = 0.0;
  double real_reward = 0.0;
  double generated_reward = 0.0;
};

DiscStepResult lm_step(disc::LmDiscriminator& d, num::Adagrad& opt, std::span<const Text> real,
                       std::span<const Text> generated);

// ---- schedules ----

// Remaining generator pretraining epochs, then remaining discriminator
// pretraining epochs (none for the MLE baseline).
void pretrain(Models& m, const corpus::Dataset& train, const corpus::Dataset* valid, const TrainConfig& c,
              RunLog& log, Progress& p);

// Remaining adversarial iterations of the DP-GAN loop or the baseline's loop.
// `stop_after` caps the iterations run by this call.
void adversarial_train(Models& m, const corpus::Dataset& train, const TrainConfig& c, RunLog& log,
                       Progress& p, std::optional<std::size_t> stop_after = std::nullopt);

}  // namespace dpgan::train
