#include <cmath>

#include "doctest.h"
#include "dpgan/errors.hpp"
#include "dpgan/evaluation/metrics.hpp"
#include "metric_oracles.hpp"

using namespace dpgan;
using namespace dpgan::eval;

TEST_SUITE("evaluation") {

TEST_CASE("diversity hand examples") {
  const std::vector<Sentence> cats{{10, 11}, {10, 11}};
  const auto r = diversity_report(cats);
  CHECK(r.tokens == 4);
  CHECK(r.dist1 == 2);
  CHECK(r.dist2 == 1);
  CHECK(r.dist_s == 1);
  const std::vector<Sentence> abc{{1, 2, 3}};
  CHECK(diversity_report(abc).dist2 == 2);
  CHECK(diversity_report(abc).dist3 == 1);
  CHECK(diversity_report(std::span<const Sentence>{}) == DiversityReport{});
}

TEST_CASE("n-grams do not cross sentence boundaries") {
  const std::vector<Text> texts{{{1, 2}, {3}}};
  const auto r = diversity_report(texts);
  CHECK(r.dist2 == 1);
  CHECK(r.sentences == 2);
}

TEST_CASE("diversity matches an independent recount") {
  num::Rng rng(1);
  const auto corpus = oracle::toy_corpus(rng, 1000, 6, 7);
  const auto r = diversity_report(corpus);
  const auto o = oracle::recount(corpus);
  CHECK(r.tokens == o.tokens);
  CHECK(r.dist1 == o.d1);
  CHECK(r.dist2 == o.d2);
  CHECK(r.dist3 == o.d3);
  CHECK(r.dist_s == o.ds);
  CHECK(r.dist1 <= r.tokens);
  CHECK(r.dist_s <= r.sentences);
}

TEST_CASE("diversity is permutation invariant and ignores duplicates") {
  num::Rng rng(2);
  auto corpus = oracle::toy_corpus(rng, 200, 5, 6);
  const auto base = diversity_report(corpus);
  auto shuffled = corpus;
  const auto perm = num::permutation(rng, shuffled.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = corpus[perm[i]];
  CHECK(diversity_report(shuffled) == base);
  corpus.push_back(corpus[17]);
  const auto dup = diversity_report(corpus);
  CHECK(dup.tokens == base.tokens + corpus[17].size());
  CHECK(dup.dist1 == base.dist1);
  CHECK(dup.dist2 == base.dist2);
  CHECK(dup.dist3 == base.dist3);
  CHECK(dup.dist_s == base.dist_s);
}

TEST_CASE("bleu hand-computed cases") {
  const Sentence ref{1, 2, 3, 4, 1, 5};   // the cat is on the mat
  const Sentence cand{1, 2, 6, 4, 1, 5};  // the cat sat on the mat
  const std::vector<Sentence> refs{ref};
  CHECK(bleu(ref, refs) == doctest::Approx(1.0).epsilon(1e-15));
  const double expected = std::pow(5.0 / 6.0 * 3.0 / 5.0 * 1.0 / 4.0 * 1e-9, 0.25);
  CHECK(std::abs(bleu(cand, refs) - expected) < 1e-9);

  const std::vector<Sentence> two{{1, 2}, {2, 1, 1}};
  CHECK(std::abs(bleu({1, 2, 1}, two, 2) - 1.0) < 1e-12);
  const std::vector<Sentence> longer{{1, 2, 3, 4}};
  CHECK(std::abs(bleu({1, 2}, longer, 2) - std::exp(-1.0)) < 1e-12);
  CHECK(std::abs(bleu({7, 8, 9, 7, 8, 9}, refs) - 1e-9) < 1e-15);
  CHECK(bleu({}, refs) == 0.0);
  CHECK_THROWS_AS(bleu(cand, refs, 0), ContractViolation);
}

TEST_CASE("bleu agrees with the oracle, ignores reference order and stays <= 1") {
  num::Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto cand = oracle::toy_corpus(rng, 1, 4, 8)[0];
    auto refs = oracle::toy_corpus(rng, 1 + num::uniform_index(rng, 3), 4, 8);
    for (auto& r : refs)
      if (r.empty()) r.push_back(5);
    const double b = bleu(cand, refs);
    CHECK(std::abs(b - oracle::bleu(cand, refs, 4, 1e-9)) <= 1e-9);
    CHECK(b <= 1.0);
    std::reverse(refs.begin(), refs.end());
    CHECK(bleu(cand, refs) == b);
  }
}

TEST_CASE("frequency cosine self-similarity and orthogonality") {
  num::Rng rng(4);
  const auto ref = oracle::toy_corpus(rng, 300, 40, 6);
  const std::vector<RankBin> bins{{1, 10}, {11, 20}, {21, 40}};
  for (const auto& b : frequency_cosine(ref, ref, bins).bins) CHECK(b.cosine == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Sentence> other{{1000, 1001}};
  for (const auto& b : frequency_cosine(ref, other, bins).bins) CHECK(b.cosine == 0.0);
  CHECK_THROWS_AS(frequency_cosine(std::vector<Sentence>{}, ref, bins), ContractViolation);
}

TEST_CASE("frequency cosine hand computation") {
  // reference counts: a=3, b=2, c=1 -> ranks a, b, c
  const std::vector<Sentence> ref{{1, 1, 2}, {1, 2, 3}};
  // generated counts: a=1, b=0, c=3
  const std::vector<Sentence> gen{{1, 3}, {3, 3}};
  const std::vector<RankBin> bins{{1, 2}, {3, 3}};
  const auto p = frequency_cosine(ref, gen, bins);
  REQUIRE(p.ranked == std::vector<corpus::TokenId>{1, 2, 3});
  // bin 1: ref (3/6, 2/6), gen (1/4, 0) -> cosine = 3 / sqrt(13)
  CHECK(std::abs(p.bins[0].cosine - 3.0 / std::sqrt(13.0)) < 1e-12);
  CHECK(std::abs(p.bins[1].cosine - 1.0) < 1e-12);
  CHECK(p.bins[0].words == 2);
}

TEST_CASE("frequency cosine values stay in [0, 1]") {
  num::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = oracle::toy_corpus(rng, 50, 30, 5);
    const auto gen = oracle::toy_corpus(rng, 50, 30, 5);
    const auto p = frequency_cosine(ref, gen, {{1, 5}, {6, 15}, {16, 40}});
    for (const auto& b : p.bins) CHECK((b.cosine >= 0.0 && b.cosine <= 1.0));
  }
  CHECK(default_rank_bins().size() == 4);
  CHECK(default_rank_bins()[3].last == 2000);
}

TEST_CASE("summaries and histograms") {
  const std::vector<double> same(10, 0.3);
  const auto s = summarize(same);
  CHECK(s.stddev == 0.0);
  const auto h = histogram(same, 0.3, 0.3, 50);
  CHECK(h[0] == 10);
  const std::vector<double> spread{0.0, 0.5, 1.0};
  const auto counts = histogram(spread, 0.0, 1.0, 4);
  CHECK(counts == std::vector<std::size_t>{1, 0, 1, 1});
  const auto s2 = summarize(spread);
  CHECK(s2.mean == doctest::Approx(0.5));
  CHECK(s2.cv == doctest::Approx(std::sqrt(1.0 / 6.0) / 0.5));
}

TEST_CASE("untrained classifier centres both sources at one half") {
  disc::LmDiscriminator lm({12, 3, 4}, 1);
  disc::ClassifierDiscriminator cls({12, 3, 4}, 2);
  cls.head.value.fill(0.0);
  cls.head_bias.value.fill(0.0);
  const std::vector<Sentence> real{{5, 6}, {7}}, gen{{8, 8, 8}};
  const auto h = reward_histogram(real, gen, lm, cls, 50);
  CHECK(h.classifier.real.summary.mean == 0.5);
  CHECK(h.classifier.generated.summary.mean == 0.5);
  CHECK(h.classifier.real.summary.stddev == 0.0);
  CHECK(h.lm.real.counts.size() == 50);
  std::size_t total = 0;
  for (auto c : h.lm.real.counts) total += c;
  CHECK(total == 2);
}

}  // TEST_SUITE
