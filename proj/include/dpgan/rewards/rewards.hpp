#pragma once

#include <span>
#include <string>
#include <vector>

#include "dpgan/corpus/types.hpp"
#include "dpgan/discriminators/discriminators.hpp"

namespace dpgan::rewards {

using corpus::Sentence;
using corpus::Text;

// S: sentence-level only (word rewards := 1); W: word-level only
// (sentence reward := 1); SW: both.
enum class RewardMode { kS, kW, kSW };

std::string mode_name(RewardMode m);
// Accepts "S", "W", "SW" (case-insensitive); throws ValidationError otherwise.
RewardMode parse_mode(const std::string& s);

using Grid = std::vector<std::vector<double>>;  // [sentence][word]

struct RewardBundle {
  Grid word_rewards;
  std::vector<double> sentence_rewards;
  Grid returns;
  double gamma = 1.0;
  RewardMode mode = RewardMode::kSW;
};

// Mean of the word rewards of one sentence.
double sentence_reward(std::span<const double> word_rewards);

// R_k = sum_{i >= k} gamma^(i-1) * S * w_i for one sentence (k is 1-based),
// with S or w replaced by 1 according to the mode.
std::vector<double> sentence_returns(std::span<const double> word_rewards, double sentence_reward,
                                     double gamma, RewardMode mode);

RewardBundle assemble_returns(const Grid& word_rewards, const std::vector<double>& sentence_rewards,
                              double gamma, RewardMode mode);

// Word rewards from the LM discriminator, sentence rewards as their means.
RewardBundle lm_rewards(const disc::LmDiscriminator& d, const Text& text, double gamma,
                        RewardMode mode);

// gamma^(k-1) * R_{t,k}: the weight of log G(y_{t,k}) in the policy gradient.
Grid policy_weights(const Grid& returns, double gamma);

void validate_gamma(double gamma);

}  // namespace dpgan::rewards
