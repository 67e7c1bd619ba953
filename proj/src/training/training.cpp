#include "dpgan/training/training.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iostream>

#include "dpgan/errors.hpp"
#include "dpgan/evaluation/metrics.hpp"
#include "dpgan/numerics/ops.hpp"
#include "dpgan/rewards/rollout.hpp"

namespace dpgan::train {

namespace sp = corpus::special;
using num::mix_seed;

std::string baseline_name(Baseline b) {
  switch (b) {
    case Baseline::kNone: return "none";
    case Baseline::kMle: return "mle";
    case Baseline::kPgBleu: return "pg_bleu";
    case Baseline::kSeqGan: return "seqgan";
  }
  return "?";
}

Baseline parse_baseline(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (l == "none" || l == "dpgan") return Baseline::kNone;
  if (l == "mle") return Baseline::kMle;
  if (l == "pg_bleu" || l == "pg-bleu") return Baseline::kPgBleu;
  if (l == "seqgan") return Baseline::kSeqGan;
  throw ValidationError("unknown baseline '" + s + "' (expected none, mle, pg_bleu or seqgan)");
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ValidationError("train.batch_size must be >= 1");
  if (rollouts == 0) throw ValidationError("train.rollouts must be >= 1");
  if (bleu_max_n == 0) throw ValidationError("train.bleu_max_n must be >= 1");
  if (!(bleu_epsilon > 0.0)) throw ValidationError("train.bleu_epsilon must be positive");
  if (!(optimizer.learning_rate > 0.0)) throw ValidationError("optimizer.learning_rate must be positive");
  if (!(optimizer.epsilon > 0.0)) throw ValidationError("optimizer.epsilon must be positive");
  rewards::validate_gamma(gamma);
  gen::validate(generation);
}

Models make_models(std::size_t vocab, std::size_t embedding, std::size_t hidden, const TrainConfig& c,
                   double init_scale) {
  const disc::Dims dd{vocab, embedding, hidden};
  return Models{gen::GeneratorModel({vocab, embedding, hidden}, mix_seed(c.seed, {0x9e}), init_scale),
                num::Adagrad(c.optimizer),
                disc::LmDiscriminator(dd, mix_seed(c.seed, {0x1d}), init_scale),
                num::Adagrad(c.optimizer),
                disc::ClassifierDiscriminator(dd, mix_seed(c.seed, {0xc5}), init_scale),
                num::Adagrad(c.optimizer)};
}

std::vector<Text> sample_texts(const gen::GeneratorModel& g, std::span<const Sentence> sources,
                               const gen::GenerationConfig& c, std::uint64_t seed) {
  std::vector<Text> out;
  out.reserve(sources.size());
  for (std::size_t b = 0; b < sources.size(); ++b) {
    num::Rng rng(mix_seed(seed, {b}));
    out.push_back(gen::generate(g, sources[b], c, rng).text);
  }
  return out;
}

std::vector<Sentence> content_sentences(const Text& t) {
  std::vector<Sentence> out;
  for (const auto& s : t)
    if (!(s.size() == 1 && s[0] == sp::kEos)) out.push_back(s);
  return out;
}

std::vector<Sentence> content_sentences(std::span<const Text> texts) {
  std::vector<Sentence> out;
  for (const auto& t : texts) {
    auto s = content_sentences(t);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

double corpus_nll(const gen::GeneratorModel& g, const corpus::Dataset& data) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& p : data.pairs) {
    for (const auto& row : gen::log_prob_of(g, p.source, corpus::to_model_text(p.target))) {
      for (double lp : row) total -= lp;
      tokens += row.size();
    }
  }
  if (tokens == 0) throw ContractViolation("corpus_nll: no target tokens");
  return total / static_cast<double>(tokens);
}

num::Var surrogate_loss(num::Graph& g, const gen::GeneratorModel& m, std::span<const Sentence> sources,
                        std::span<const Text> texts, std::span<const Grid> weights) {
  if (sources.size() != texts.size() || texts.size() != weights.size()) {
    throw ContractViolation("surrogate_loss: sources, texts and weights must align");
  }
  std::vector<num::Var> terms;
  std::vector<double> coeff;
  const double scale = -1.0 / static_cast<double>(texts.size());
  for (std::size_t b = 0; b < texts.size(); ++b) {
    if (texts[b].empty()) continue;
    const auto lps = gen::word_log_probs(g, m, sources[b], texts[b]);
    if (weights[b].size() != lps.size()) throw ContractViolation("surrogate_loss: weight shape mismatch");
    for (std::size_t t = 0; t < lps.size(); ++t) {
      if (weights[b][t].size() != lps[t].size()) throw ContractViolation("surrogate_loss: weight shape mismatch");
      for (std::size_t k = 0; k < lps[t].size(); ++k) {
        terms.push_back(lps[t][k]);
        coeff.push_back(scale * weights[b][t][k]);
      }
    }
  }
  if (terms.empty()) throw ContractViolation("surrogate_loss: no generated words");
  return num::weighted_sum(terms, coeff);
}

double apply_policy_gradient(gen::GeneratorModel& m, num::Adagrad& opt, std::span<const Sentence> sources,
                             std::span<const Text> texts, std::span<const Grid> weights) {
  num::Graph g;
  num::Var loss = surrogate_loss(g, m, sources, texts, weights);
  const auto params = m.parameters();
  num::GradientBuffer grads(params);
  grads.accumulate(g.backward(loss));
  opt.step(params, grads);
  return loss.value().item();
}

std::vector<Grid> weights_from(const std::vector<rewards::RewardBundle>& bundles, const TrainConfig& c) {
  std::vector<Grid> out;
  out.reserve(bundles.size());
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& b : bundles) {
    out.push_back(rewards::policy_weights(b.returns, c.gamma));
    for (const auto& row : out.back())
      for (double w : row) {
        total += w;
        ++n;
      }
  }
  if (c.reward_baseline && n > 0) {
    const double mean = total / static_cast<double>(n);
    for (auto& grid : out)
      for (auto& row : grid)
        for (double& w : row) w -= mean;
  }
  return out;
}

namespace {

std::vector<Sentence> sources_of(const corpus::Batch& b) {
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.source_of(i));
  return out;
}

std::vector<Text> targets_of(const corpus::Batch& b) {
  std::vector<Text> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.target_of(i));
  return out;
}

bool all_empty(const std::vector<Text>& texts) {
  return std::all_of(texts.begin(), texts.end(), [](const Text& t) { return t.empty(); });
}

double text_mean(const Grid& word_rewards) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& row : word_rewards)
    for (double r : row) {
      total += r;
      ++n;
    }
  return n ? total / static_cast<double>(n) : 0.0;
}

StepResult lm_update(gen::GeneratorModel& g, num::Adagrad& opt, const disc::LmDiscriminator& d,
                     const std::vector<Sentence>& sources, std::vector<Text> texts, const TrainConfig& c) {
  StepResult r;
  r.texts = std::move(texts);
  if (all_empty(r.texts)) {
    r.skipped = true;
    return r;
  }
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& t : r.texts) {
    if (t.empty()) {
      r.bundles.push_back({});
      continue;
    }
    r.bundles.push_back(rewards::lm_rewards(d, t, c.gamma, c.mode));
    total += text_mean(r.bundles.back().word_rewards);
    ++used;
  }
  r.mean_reward = total / static_cast<double>(used);
  r.loss = apply_policy_gradient(g, opt, sources, r.texts, weights_from(r.bundles, c));
  return r;
}

}  // namespace

double mle_step(gen::GeneratorModel& g, num::Adagrad& opt, const corpus::Batch& batch) {
  num::Graph graph;
  num::Var loss = gen::mle_loss(graph, g, batch);
  const auto params = g.parameters();
  num::GradientBuffer grads(params);
  grads.accumulate(graph.backward(loss));
  opt.step(params, grads);
  return loss.value().item();
}

StepResult policy_gradient_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::LmDiscriminator& d,
                                const corpus::Batch& sources, const TrainConfig& c, std::uint64_t seed) {
  const auto src = sources_of(sources);
  return lm_update(g, opt, d, src, sample_texts(g, src, c.generation, seed), c);
}

StepResult teacher_forcing_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::LmDiscriminator& d,
                                const corpus::Batch& real, const TrainConfig& c) {
  return lm_update(g, opt, d, sources_of(real), targets_of(real), c);
}

double text_bleu(const Text& sample, const Text& reference, std::size_t max_n, double eps) {
  auto flat = [](const Text& t) {
    Sentence out;
    for (const auto& s : corpus::strip_markers(t)) out.insert(out.end(), s.begin(), s.end());
    return out;
  };
  const std::vector<Sentence> refs{flat(reference)};
  if (refs[0].empty()) throw ContractViolation("text_bleu: empty reference");
  return eval::bleu(flat(sample), refs, max_n, eps);
}

StepResult pg_bleu_step(gen::GeneratorModel& g, num::Adagrad& opt, const corpus::Batch& paired,
                        const TrainConfig& c, std::uint64_t seed) {
  StepResult r;
  const auto src = sources_of(paired);
  r.texts = sample_texts(g, src, c.generation, seed);
  if (all_empty(r.texts)) {
    r.skipped = true;
    return r;
  }
  double total = 0.0;
  for (std::size_t b = 0; b < r.texts.size(); ++b) {
    const Text& t = r.texts[b];
    const double score = t.empty() ? 0.0 : text_bleu(t, paired.target_of(b), c.bleu_max_n, c.bleu_epsilon);
    total += score;
    Grid ones;
    for (const auto& s : t) ones.emplace_back(s.size(), 1.0);
    r.bundles.push_back(rewards::assemble_returns(ones, std::vector<double>(t.size(), score), c.gamma,
                                                  rewards::RewardMode::kS));
  }
  r.mean_reward = total / static_cast<double>(r.texts.size());
  r.loss = apply_policy_gradient(g, opt, src, r.texts, weights_from(r.bundles, c));
  return r;
}

StepResult seqgan_step(gen::GeneratorModel& g, num::Adagrad& opt, const disc::ClassifierDiscriminator& cls,
                       const corpus::Batch& sources, const TrainConfig& c, std::uint64_t seed) {
  StepResult r;
  const auto src = sources_of(sources);
  r.texts = sample_texts(g, src, c.generation, seed);
  if (all_empty(r.texts)) {
    r.skipped = true;
    return r;
  }
  const rewards::SentenceScorer score = [&](const Sentence& s) { return disc::classifier_score(cls, s); };
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t b = 0; b < r.texts.size(); ++b) {
    const Text& t = r.texts[b];
    rewards::RewardBundle bundle;
    bundle.gamma = c.gamma;
    for (std::size_t s = 0; s < t.size(); ++s) {
      rewards::GeneratorRollout policy(g, src[b], Text(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(s)),
                                       c.generation.max_words, c.generation.temperature);
      auto q = rewards::mcs_sentence_returns(policy, score, t[s], c.rollouts, mix_seed(seed, {0x5e9, b, s}));
      bundle.sentence_rewards.push_back(q.back());
      total += q.back();
      ++n;
      bundle.word_rewards.push_back(q);
      bundle.returns.push_back(std::move(q));
    }
    r.bundles.push_back(std::move(bundle));
  }
  r.mean_reward = total / static_cast<double>(n);
  r.loss = apply_policy_gradient(g, opt, src, r.texts, weights_from(r.bundles, c));
  return r;
}

DiscStepResult lm_step(disc::LmDiscriminator& d, num::Adagrad& opt, std::span<const Text> real,
                       std::span<const Text> generated) {
  if (real.empty() || generated.empty()) throw ContractViolation("lm_step: empty batch");
  num::Graph g;
  std::vector<num::Var> rewards;
  std::vector<double> weights;
  DiscStepResult out;
  for (const auto& t : real) {
    rewards.push_back(disc::lm_text_reward(g, d, t));
    weights.push_back(-1.0 / static_cast<double>(real.size()));
    out.real_reward += rewards.back().value().item() / static_cast<double>(real.size());
  }
  for (const auto& t : generated) {
    rewards.push_back(disc::lm_text_reward(g, d, t));
    weights.push_back(1.0 / static_cast<double>(generated.size()));
    out.generated_reward += rewards.back().value().item() / static_cast<double>(generated.size());
  }
  num::Var loss = num::weighted_sum(rewards, weights);
  const auto params = d.parameters();
  num::GradientBuffer grads(params);
  grads.accumulate(g.backward(loss));
  opt.step(params, grads);
  out.loss = loss.value().item();
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  bool on;
  Clock::time_point start = Clock::now();
  std::optional<double> seconds() const {
    if (!on) return std::nullopt;
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

void with_diversity(Record& r, std::span<const Text> texts) {
  std::vector<Sentence> words;
  for (const auto& t : texts) {
    auto s = corpus::strip_markers(t);
    words.insert(words.end(), s.begin(), s.end());
  }
  const auto d = eval::diversity_report(std::span<const Sentence>(words));
  r.dist1 = d.dist1;
  r.dist2 = d.dist2;
}

// Fixed stream tags, one per consumer.
enum Stream : std::uint64_t {
  kPretrainGen = 1,
  kPgBatches,
  kPgSamples,
  kTfBatches,
  kDiscBatches,
  kDiscSamples,
  kPretrainDisc,
  kPretrainDiscSamples,
};

corpus::BatchIterator iterator(const corpus::Dataset& d, const TrainConfig& c, Stream s) {
  return corpus::BatchIterator(d, c.batch_size, mix_seed(c.seed, {s}));
}

Record make_record(std::string kind, std::size_t iteration, std::size_t index, double loss) {
  Record r;
  r.kind = std::move(kind);
  r.iteration = iteration;
  r.index = index;
  r.loss = loss;
  return r;
}

void record(RunLog& log, Progress& p, Record r) {
  r.step = p.step++;
  log.append(std::move(r));
}

std::vector<Sentence> generated_sentences(const Models& m, const corpus::Batch& batch, const TrainConfig& c,
                                          std::uint64_t seed) {
  return content_sentences(sample_texts(m.generator, sources_of(batch), c.generation, seed));
}

}  // namespace

void pretrain(Models& m, const corpus::Dataset& train, const corpus::Dataset* valid, const TrainConfig& c,
              RunLog& log, Progress& p) {
  c.validate();
  const auto gen_it = iterator(train, c, kPretrainGen);
  const std::size_t per = gen_it.batches_per_epoch();
  for (std::size_t e = p.generator_epochs; e < c.pretrain_generator_epochs; ++e) {
    Timer timer{c.log_timings};
    double total = 0.0;
    for (std::size_t j = 0; j < per; ++j) total += mle_step(m.generator, m.generator_opt, gen_it.batch(e * per + j));
    Record r = make_record("pretrain_gen", e, 0, total / static_cast<double>(per));
    if (valid && !valid->empty()) r.validation_nll = corpus_nll(m.generator, *valid);
    r.seconds = timer.seconds();
    record(log, p, std::move(r));
    p.generator_epochs = e + 1;
  }
  if (c.baseline == Baseline::kMle || c.baseline == Baseline::kPgBleu) return;
  const auto disc_it = iterator(train, c, kPretrainDisc);
  for (std::size_t e = p.discriminator_epochs; e < c.pretrain_discriminator_epochs; ++e) {
    Timer timer{c.log_timings};
    Record r = make_record("pretrain_disc", e, 0, 0.0);
    double total = 0.0, real = 0.0, fake = 0.0;
    for (std::size_t j = 0; j < per; ++j) {
      const auto batch = disc_it.batch(e * per + j);
      const auto seed = mix_seed(c.seed, {kPretrainDiscSamples, e, j});
      if (c.baseline == Baseline::kSeqGan) {
        const auto real_s = content_sentences(targets_of(batch));
        const auto gen_s = generated_sentences(m, batch, c, seed);
        const auto res = disc::train_classifier(m.classifier, real_s, gen_s, 1, m.classifier_opt);
        total += res.losses.front();
        r.accuracy = res.accuracy;
      } else {
        const auto texts = sample_texts(m.generator, sources_of(batch), c.generation, seed);
        const auto res = lm_step(m.lm, m.lm_opt, targets_of(batch), texts);
        total += res.loss;
        real += res.real_reward;
        fake += res.generated_reward;
      }
    }
    r.kind = c.baseline == Baseline::kSeqGan ? "pretrain_classifier" : "pretrain_disc";
    r.loss = total / static_cast<double>(per);
    if (c.baseline != Baseline::kSeqGan) {
      r.real_reward = real / static_cast<double>(per);
      r.generated_reward = fake / static_cast<double>(per);
    }
    r.seconds = timer.seconds();
    record(log, p, std::move(r));
    p.discriminator_epochs = e + 1;
  }
}

void adversarial_train(Models& m, const corpus::Dataset& train, const TrainConfig& c, RunLog& log,
                       Progress& p, std::optional<std::size_t> stop_after) {
  c.validate();
  const std::size_t end = stop_after ? std::min(c.iterations, p.iterations + *stop_after) : c.iterations;
  const auto pg_it = iterator(train, c, kPgBatches);
  const auto tf_it = iterator(train, c, kTfBatches);
  const auto disc_it = iterator(train, c, kDiscBatches);
  const std::size_t M = c.generator_steps, K = c.discriminator_steps;

  for (std::size_t i = p.iterations; i < end; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const auto seed = mix_seed(c.seed, {kPgSamples, i, j});
      const auto batch = pg_it.batch(i * M + j);
      Timer timer{c.log_timings};
      switch (c.baseline) {
        case Baseline::kMle: {
          Record r = make_record("mle", i, j, mle_step(m.generator, m.generator_opt, batch));
          r.seconds = timer.seconds();
          record(log, p, std::move(r));
          continue;
        }
        case Baseline::kNone:
        case Baseline::kPgBleu:
        case Baseline::kSeqGan: {
          const StepResult res =
              c.baseline == Baseline::kNone
                  ? policy_gradient_step(m.generator, m.generator_opt, m.lm, batch, c, seed)
              : c.baseline == Baseline::kPgBleu ? pg_bleu_step(m.generator, m.generator_opt, batch, c, seed)
                                                : seqgan_step(m.generator, m.generator_opt, m.classifier, batch, c, seed);
          const char* kind = c.baseline == Baseline::kNone     ? "pg"
                             : c.baseline == Baseline::kPgBleu ? "pg_bleu"
                                                               : "seqgan";
          if (res.skipped) {
            std::cerr << "warning: iteration " << i << " step " << j << ": empty generation, update skipped\n";
            record(log, p, make_record(std::string(kind) + "_skipped", i, j, 0.0));
          } else {
            Record r = make_record(kind, i, j, res.loss);
            r.generated_reward = res.mean_reward;
            with_diversity(r, res.texts);
            r.seconds = timer.seconds();
            record(log, p, std::move(r));
          }
          break;
        }
      }
      if (!c.teacher_forcing) continue;
      Timer tf_timer{c.log_timings};
      const auto real = tf_it.batch(i * M + j);
      if (c.baseline == Baseline::kNone) {
        const auto res = teacher_forcing_step(m.generator, m.generator_opt, m.lm, real, c);
        Record r = make_record("tf", i, j, res.loss);
        r.real_reward = res.mean_reward;
        r.seconds = tf_timer.seconds();
        record(log, p, std::move(r));
      } else {
        Record r = make_record("tf", i, j, mle_step(m.generator, m.generator_opt, real));
        r.seconds = tf_timer.seconds();
        record(log, p, std::move(r));
      }
    }
    if (c.baseline == Baseline::kNone || c.baseline == Baseline::kSeqGan) {
      for (std::size_t k = 0; k < K; ++k) {
        Timer timer{c.log_timings};
        const auto batch = disc_it.batch(i * K + k);
        const auto seed = mix_seed(c.seed, {kDiscSamples, i, k});
        if (c.baseline == Baseline::kNone) {
          const auto texts = sample_texts(m.generator, sources_of(batch), c.generation, seed);
          const auto res = lm_step(m.lm, m.lm_opt, targets_of(batch), texts);
          Record r = make_record("disc", i, k, res.loss);
          r.real_reward = res.real_reward;
          r.generated_reward = res.generated_reward;
          with_diversity(r, texts);
          r.seconds = timer.seconds();
          record(log, p, std::move(r));
        } else {
          const auto real_s = content_sentences(targets_of(batch));
          const auto gen_s = generated_sentences(m, batch, c, seed);
          const auto res = disc::train_classifier(m.classifier, real_s, gen_s, 1, m.classifier_opt);
          Record r = make_record("classifier", i, k, res.losses.front());
          r.accuracy = res.accuracy;
          r.seconds = timer.seconds();
          record(log, p, std::move(r));
        }
      }
    }
    p.iterations = i + 1;
  }
}

}  // namespace dpgan::train
