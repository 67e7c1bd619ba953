#include <cmath>

#include "doctest.h"
#include "dpgan/discriminators/discriminators.hpp"
#include "dpgan/errors.hpp"
#include "gradcheck.hpp"

using namespace dpgan;
using namespace dpgan::disc;
namespace sp = corpus::special;

namespace {

constexpr Dims kSmall{12, 4, 6};

// Zero projection weights leave only the bias, so each word's reward is
// log-sum-exp(bias) - bias[w] regardless of context. `rewards` assigns
// words 5, 6, ... and the remaining mass is spread over the other ids so that
// log-sum-exp(bias) == 0.
LmDiscriminator context_free_lm(const std::vector<double>& rewards, std::size_t vocab = 12) {
  LmDiscriminator d({vocab, 3, 4}, 1);
  d.output.value.fill(0.0);
  double used = 0.0;
  for (double r : rewards) used += std::exp(-r);
  REQUIRE(used < 1.0);
  const std::size_t rest = vocab - rewards.size();
  const double other = std::log((1.0 - used) / static_cast<double>(rest));
  d.output_bias.value.fill(other);
  for (std::size_t i = 0; i < rewards.size(); ++i) d.output_bias.value[sp::kCount + i] = -rewards[i];
  return d;
}

Sentence random_sentence(num::Rng& rng, std::size_t lo, std::size_t hi, std::size_t max_len) {
  Sentence s(1 + num::uniform_index(rng, max_len));
  for (auto& t : s) t = static_cast<TokenId>(lo + num::uniform_index(rng, hi - lo));
  return s;
}

}  // namespace

TEST_SUITE("discriminators") {

TEST_CASE("word reward is zero at probability one") {
  LmDiscriminator d(kSmall, 2);
  d.output.value.fill(0.0);
  d.output_bias.value.fill(0.0);
  d.output_bias.value[7] = 1000.0;
  for (double r : lm_word_rewards(d, {7, 7, 7})) CHECK(r == 0.0);
}

TEST_CASE("word reward at probability e^-2 is 2") {
  const auto d = context_free_lm({2.0});
  for (double r : lm_word_rewards(d, {5, 5})) CHECK(std::abs(r - 2.0) < 1e-12);
}

TEST_CASE("uniform LM rewards every word with ln V") {
  LmDiscriminator d(kSmall, 3);
  d.output.value.fill(0.0);
  d.output_bias.value.fill(0.0);
  for (double r : lm_word_rewards(d, {5, 9, sp::kEosent})) CHECK(r == doctest::Approx(std::log(12.0)).epsilon(1e-14));
}

TEST_CASE("text reward is the mean over all words") {
  const auto one = context_free_lm({1.0});
  CHECK(std::abs(lm_text_reward(one, {{5}}) - 1.0) < 1e-12);
  const auto d = context_free_lm({1.0, 3.0, 2.0});
  CHECK(std::abs(lm_text_reward(d, {{5, 6}, {7}}) - 2.0) < 1e-12);
  CHECK_THROWS_AS(lm_text_reward(d, Text{}), ContractViolation);
}

TEST_CASE("text reward equals the mean of word rewards on random texts") {
  LmDiscriminator d(kSmall, 4, 0.5);
  num::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Text text(1 + num::uniform_index(rng, 3));
    for (auto& s : text) s = random_sentence(rng, 3, 12, 5);
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& row : lm_text_word_rewards(d, text))
      for (double r : row) {
        CHECK(r >= 0.0);
        total += r;
        ++n;
      }
    CHECK(std::abs(lm_text_reward(d, text) - total / static_cast<double>(n)) < 1e-12);
  }
}

TEST_CASE("word rewards are prefix-causal") {
  LmDiscriminator d(kSmall, 5, 0.5);
  num::Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    Sentence s = random_sentence(rng, 5, 12, 6);
    const auto base = lm_word_rewards(d, s);
    const std::size_t k = num::uniform_index(rng, s.size());
    s[k] = static_cast<TokenId>(5 + (s[k] - 5 + 1) % 7);
    const auto changed = lm_word_rewards(d, s);
    for (std::size_t i = 0; i < k; ++i) CHECK(changed[i] == base[i]);
  }
}

TEST_CASE("lm rewards reject invalid ids") {
  LmDiscriminator d(kSmall, 6);
  CHECK_THROWS_AS(lm_word_rewards(d, {12}), ContractViolation);
  CHECK_THROWS_AS(lm_word_rewards(d, {}), ContractViolation);
}

TEST_CASE("discriminator loss arithmetic and symmetry") {
  const auto d = context_free_lm({3.0, 1.0});
  const std::vector<Text> real{{{5, 5}}, {{5}}};
  const std::vector<Text> gen{{{6}}, {{6, 6, 6}}};
  CHECK(std::abs(lm_discriminator_loss_value(d, real, gen) + 2.0) < 1e-12);
  CHECK(std::abs(lm_discriminator_loss_value(d, real, real)) < 1e-12);
  CHECK_THROWS_AS(lm_discriminator_loss_value(d, real, {}), ContractViolation);
}

TEST_CASE("discriminator loss gradient matches finite differences") {
  LmDiscriminator d({7, 3, 4}, 11, 0.5);
  const std::vector<Text> real{{{5, 6, sp::kEosent}, {sp::kEos}}, {{6, sp::kEosent}}};
  const std::vector<Text> gen{{{5, 5, 5}}};
  const double err = gradcheck::parameter_error(
      d.parameters(), [&](num::Graph& g) { return lm_discriminator_loss(g, d, real, gen); });
  CHECK(err < 1e-4);
}

TEST_CASE("training for zero steps is a no-op and traces match the step count") {
  LmDiscriminator d(kSmall, 12);
  const LmDiscriminator before = d;
  const TextSource real = [](std::size_t) { return std::vector<Text>{{{5, 6}}}; };
  const TextSource gen = [](std::size_t) { return std::vector<Text>{{{7}}}; };
  num::Adagrad opt;
  CHECK(train_lm_discriminator(d, real, gen, 0, opt).empty());
  for (std::size_t i = 0; i < d.parameters().size(); ++i) CHECK(d.parameters()[i]->value == before.parameters()[i]->value);
  CHECK(train_lm_discriminator(d, real, gen, 4, opt).size() == 4);
}

TEST_CASE("trained LM rewards diverse real text above repetitive generated text") {
  LmDiscriminator d({20, 8, 12}, 13);
  num::Rng rng(14);
  std::vector<Text> real;
  for (int i = 0; i < 16; ++i) real.push_back({random_sentence(rng, 5, 20, 6)});
  const std::vector<Text> gen(16, Text{{5, 6, 5, 6}});
  num::Adagrad opt;
  train_lm_discriminator(d, [&](std::size_t) { return real; }, [&](std::size_t) { return gen; }, 30, opt);
  double r = 0.0, f = 0.0;
  for (const auto& t : real) r += lm_text_reward(d, t);
  for (const auto& t : gen) f += lm_text_reward(d, t);
  CHECK(f < r);
}

TEST_CASE("classifier with a zero head scores 0.5") {
  ClassifierDiscriminator c(kSmall, 1);
  c.head.value.fill(0.0);
  c.head_bias.value.fill(0.0);
  CHECK(classifier_score(c, {5, 6, 7}) == 0.5);
}

TEST_CASE("classifier scores stay strictly inside (0, 1)") {
  ClassifierDiscriminator c(kSmall, 2, 0.5);
  num::Rng rng(3);
  for (double bias : {-1e4, -40.0, 0.0, 40.0, 1e4}) {
    c.head_bias.value[0] = bias;
    for (int i = 0; i < 20; ++i) {
      const double s = classifier_score(c, random_sentence(rng, 0, 12, 5));
      CHECK(s > 0.0);
      CHECK(s < 1.0);
    }
  }
}

TEST_CASE("classifier training separates disjoint vocabularies") {
  ClassifierDiscriminator c({16, 6, 8}, 4);
  num::Rng rng(5);
  std::vector<Sentence> real, gen, real_test, gen_test;
  for (int i = 0; i < 30; ++i) {
    real.push_back(random_sentence(rng, 5, 10, 5));
    gen.push_back(random_sentence(rng, 10, 16, 5));
    real_test.push_back(random_sentence(rng, 5, 10, 5));
    gen_test.push_back(random_sentence(rng, 10, 16, 5));
  }
  num::Adagrad opt;
  const auto untrained = train_classifier(c, real, gen, 0, opt, real_test, gen_test);
  CHECK(std::abs(untrained.accuracy - 0.5) <= 0.1);
  {
    auto probe = c;
    num::Adagrad gentle({0.01, 1e-10, 5.0});
    const auto first = train_classifier(probe, real, gen, 10, gentle);
    for (std::size_t i = 1; i < first.losses.size(); ++i) CHECK(first.losses[i] < first.losses[i - 1]);
  }
  const auto trained = train_classifier(c, real, gen, 60, opt, real_test, gen_test);
  CHECK(trained.accuracy > 0.95);
  for (const auto& s : real_test) CHECK(classifier_score(c, s) > 0.9);
}

TEST_CASE("classifier loss gradient matches finite differences") {
  ClassifierDiscriminator c({7, 3, 4}, 6, 0.5);
  const std::vector<Sentence> real{{5, 6}, {6}};
  const std::vector<Sentence> gen{{5, 5, 5}};
  const double err = gradcheck::parameter_error(
      c.parameters(), [&](num::Graph& g) { return classifier_loss(g, c, real, gen); });
  CHECK(err < 1e-4);
}

}  // TEST_SUITE
