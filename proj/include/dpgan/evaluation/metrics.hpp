#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpgan/corpus/types.hpp"
#include "dpgan/discriminators/discriminators.hpp"

namespace dpgan::eval {

using corpus::Sentence;
using corpus::Text;

struct DiversityReport {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t dist1 = 0;
  std::size_t dist2 = 0;
  std::size_t dist3 = 0;
  std::size_t dist_s = 0;

  bool operator==(const DiversityReport&) const = default;
};

// Distinct n-grams (inside sentences) and distinct sentences, pooled over the set.
DiversityReport diversity_report(std::span<const Sentence> sentences);
DiversityReport diversity_report(std::span<const Text> texts);

// Smoothed BLEU: geometric mean of clipped n-gram precisions for
// n = 1..min(max_n, |candidate|), with zero-match orders set to smoothing_eps,
// times the brevity penalty against the closest reference length (ties: shorter).
// An empty candidate scores 0.
double bleu(const Sentence& candidate, std::span<const Sentence> references, std::size_t max_n = 4,
            double smoothing_eps = 1e-9);

struct RankBin {
  std::size_t first = 1;  // 1-based inclusive ranks
  std::size_t last = 500;
};

std::vector<RankBin> default_rank_bins();

struct BinCosine {
  RankBin bin;
  std::size_t words = 0;  // reference words that fall in the bin
  double cosine = 0.0;
};

struct FrequencyProfile {
  std::vector<Sentence::value_type> ranked;  // reference words by rank
  std::vector<double> reference_freq;         // aligned with `ranked`
  std::vector<double> generated_freq;         // aligned with `ranked`
  std::vector<BinCosine> bins;
};

// Per-bin cosine between reference and generated relative frequencies, with
// words indexed by their rank in the reference (count desc, first occurrence asc).
FrequencyProfile frequency_cosine(std::span<const Sentence> reference,
                                  std::span<const Sentence> generated,
                                  const std::vector<RankBin>& bins = default_rank_bins());

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double cv = 0.0;      // stddev / |mean|, 0 when the mean is 0
};

Summary summarize(std::span<const double> values);

struct RewardCell {
  std::vector<double> values;
  std::vector<std::size_t> counts;
  Summary summary;
};

// One discriminator: shared bin edges over both sources.
struct RewardPanel {
  double low = 0.0;
  double high = 0.0;
  RewardCell real;
  RewardCell generated;
};

struct RewardHistogram {
  std::size_t n_bins = 50;
  RewardPanel lm;
  RewardPanel classifier;
};

// Fixed-width histogram over [low, high]; the top edge falls in the last bin,
// and a degenerate range puts all mass in bin 0.
std::vector<std::size_t> histogram(std::span<const double> values, double low, double high,
                                   std::size_t n_bins);
RewardPanel reward_panel(std::vector<double> real, std::vector<double> generated,
                         std::size_t n_bins);

// Sentence-level LM reward and classifier score of every sample.
RewardHistogram reward_histogram(std::span<const Sentence> real, std::span<const Sentence> generated,
                                 const disc::LmDiscriminator& lm,
                                 const disc::ClassifierDiscriminator& classifier,
                                 std::size_t n_bins = 50);

}  // namespace dpgan::eval
