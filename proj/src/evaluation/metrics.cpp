#include "dpgan/evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "dpgan/errors.hpp"
#include "dpgan/rewards/rewards.hpp"

namespace dpgan::eval {

namespace {

using Gram = std::vector<corpus::TokenId>;

std::map<Gram, std::size_t> ngram_counts(const Sentence& s, std::size_t n) {
  std::map<Gram, std::size_t> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[Gram(s.begin() + i, s.begin() + i + n)];
  return out;
}

}  // namespace

DiversityReport diversity_report(std::span<const Sentence> sentences) {
  DiversityReport r;
  std::set<Gram> grams[3];
  std::set<Sentence> whole;
  for (const auto& s : sentences) {
    ++r.sentences;
    r.tokens += s.size();
    whole.insert(s);
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t i = 0; i + n <= s.size(); ++i) grams[n - 1].emplace(s.begin() + i, s.begin() + i + n);
  }
  r.dist1 = grams[0].size();
  r.dist2 = grams[1].size();
  r.dist3 = grams[2].size();
  r.dist_s = whole.size();
  return r;
}

DiversityReport diversity_report(std::span<const Text> texts) {
  std::vector<Sentence> flat;
  for (const auto& t : texts) flat.insert(flat.end(), t.begin(), t.end());
  return diversity_report(std::span<const Sentence>(flat));
}

double bleu(const Sentence& candidate, std::span<const Sentence> references, std::size_t max_n,
            double smoothing_eps) {
  if (max_n < 1) throw ContractViolation("bleu: max_n must be >= 1");
  if (candidate.empty()) return 0.0;
  if (references.empty()) throw ContractViolation("bleu: no references");
  const std::size_t orders = std::min(max_n, candidate.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const auto cand = ngram_counts(candidate, n);
    std::map<Gram, std::size_t> max_ref;
    for (const auto& ref : references)
      for (const auto& [g, c] : ngram_counts(ref, n)) max_ref[g] = std::max(max_ref[g], c);
    std::size_t matches = 0, total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) matches += std::min(c, it->second);
    }
    const double p = matches == 0 ? smoothing_eps : static_cast<double>(matches) / static_cast<double>(total);
    log_sum += std::log(p);
  }
  const double c = static_cast<double>(candidate.size());
  std::size_t closest = references[0].size();
  for (const auto& ref : references) {
    const auto d = [&](std::size_t len) { return std::abs(static_cast<double>(len) - c); };
    if (d(ref.size()) < d(closest) || (d(ref.size()) == d(closest) && ref.size() < closest)) closest = ref.size();
  }
  const double r = static_cast<double>(closest);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

std::vector<RankBin> default_rank_bins() { return {{1, 500}, {501, 1000}, {1001, 1500}, {1501, 2000}}; }

FrequencyProfile frequency_cosine(std::span<const Sentence> reference,
                                  std::span<const Sentence> generated,
                                  const std::vector<RankBin>& bins) {
  std::unordered_map<corpus::TokenId, std::pair<std::size_t, std::size_t>> stats;  // count, first seen
  std::size_t position = 0, ref_total = 0;
  for (const auto& s : reference)
    for (auto t : s) {
      auto [it, fresh] = stats.try_emplace(t, 0, position);
      ++it->second.first;
      ++position;
      ++ref_total;
    }
  if (ref_total == 0) throw ContractViolation("frequency_cosine: empty reference corpus");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].first < 1 || bins[i].last < bins[i].first || (i > 0 && bins[i].first <= bins[i - 1].last)) {
      throw ValidationError("frequency_cosine: rank bins must be ordered, disjoint and 1-based");
    }
  }
  FrequencyProfile p;
  for (const auto& [t, st] : stats) p.ranked.push_back(t);
  std::sort(p.ranked.begin(), p.ranked.end(), [&](auto a, auto b) {
    const auto& sa = stats.at(a);
    const auto& sb = stats.at(b);
    return sa.first != sb.first ? sa.first > sb.first : sa.second < sb.second;
  });
  std::unordered_map<corpus::TokenId, std::size_t> gen_counts;
  std::size_t gen_total = 0;
  for (const auto& s : generated)
    for (auto t : s) {
      ++gen_counts[t];
      ++gen_total;
    }
  for (auto t : p.ranked) {
    p.reference_freq.push_back(static_cast<double>(stats.at(t).first) / static_cast<double>(ref_total));
    auto it = gen_counts.find(t);
    const double g = it == gen_counts.end() || gen_total == 0
                         ? 0.0
                         : static_cast<double>(it->second) / static_cast<double>(gen_total);
    p.generated_freq.push_back(g);
  }
  for (const auto& bin : bins) {
    BinCosine out{bin, 0, 0.0};
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t rank = bin.first; rank <= bin.last && rank <= p.ranked.size(); ++rank) {
      const double a = p.reference_freq[rank - 1], b = p.generated_freq[rank - 1];
      dot += a * b;
      na += a * a;
      nb += b * b;
      ++out.words;
    }
    if (na > 0.0 && nb > 0.0) out.cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
    p.bins.push_back(out);
  }
  return p;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  // Welford: a constant sample yields exactly its value and zero spread.
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(++k);
    m2 += delta * (v - s.mean);
  }
  s.stddev = std::sqrt(m2 / static_cast<double>(k));
  s.cv = s.mean == 0.0 ? 0.0 : s.stddev / std::abs(s.mean);
  return s;
}

std::vector<std::size_t> histogram(std::span<const double> values, double low, double high,
                                   std::size_t n_bins) {
  if (n_bins == 0) throw ContractViolation("histogram: n_bins must be positive");
  std::vector<std::size_t> counts(n_bins, 0);
  const double width = (high - low) / static_cast<double>(n_bins);
  for (double v : values) {
    std::size_t bin = 0;
    if (width > 0.0) {
      const double pos = std::floor((v - low) / width);
      bin = pos <= 0.0 ? 0 : std::min(n_bins - 1, static_cast<std::size_t>(pos));
    }
    ++counts[bin];
  }
  return counts;
}

RewardPanel reward_panel(std::vector<double> real, std::vector<double> generated, std::size_t n_bins) {
  RewardPanel p;
  bool any = false;
  for (const auto* vs : {&real, &generated})
    for (double v : *vs) {
      p.low = any ? std::min(p.low, v) : v;
      p.high = any ? std::max(p.high, v) : v;
      any = true;
    }
  p.real.counts = histogram(real, p.low, p.high, n_bins);
  p.generated.counts = histogram(generated, p.low, p.high, n_bins);
  p.real.summary = summarize(real);
  p.generated.summary = summarize(generated);
  p.real.values = std::move(real);
  p.generated.values = std::move(generated);
  return p;
}

RewardHistogram reward_histogram(std::span<const Sentence> real, std::span<const Sentence> generated,
                                 const disc::LmDiscriminator& lm,
                                 const disc::ClassifierDiscriminator& classifier, std::size_t n_bins) {
  if (real.empty() || generated.empty()) throw ContractViolation("reward_histogram: empty sample set");
  auto lm_values = [&](std::span<const Sentence> ss) {
    std::vector<double> out;
    for (const auto& s : ss) out.push_back(rewards::sentence_reward(disc::lm_word_rewards(lm, s)));
    return out;
  };
  auto cls_values = [&](std::span<const Sentence> ss) {
    std::vector<double> out;
    for (const auto& s : ss) out.push_back(disc::classifier_score(classifier, s));
    return out;
  };
  RewardHistogram h;
  h.n_bins = n_bins;
  h.lm = reward_panel(lm_values(real), lm_values(generated), n_bins);
  h.classifier = reward_panel(cls_values(real), cls_values(generated), n_bins);
  return h;
}

}  // namespace dpgan::eval
