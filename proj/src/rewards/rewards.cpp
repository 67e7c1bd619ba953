#include "dpgan/rewards/rewards.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dpgan/errors.hpp"

namespace dpgan::rewards {

std::string mode_name(RewardMode m) {
  switch (m) {
    case RewardMode::kS: return "S";
    case RewardMode::kW: return "W";
    case RewardMode::kSW: return "SW";
  }
  return "?";
}

RewardMode parse_mode(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (u == "S") return RewardMode::kS;
  if (u == "W") return RewardMode::kW;
  if (u == "SW") return RewardMode::kSW;
  throw ValidationError("unknown reward mode '" + s + "' (expected S, W or SW)");
}

void validate_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ValidationError("discount gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
}

double sentence_reward(std::span<const double> word_rewards) {
  if (word_rewards.empty()) throw ContractViolation("sentence_reward: empty sentence");
  double total = 0.0;
  for (double r : word_rewards) total += r;
  return total / static_cast<double>(word_rewards.size());
}

std::vector<double> sentence_returns(std::span<const double> word_rewards, double sentence_reward,
                                     double gamma, RewardMode mode) {
  validate_gamma(gamma);
  const double s = mode == RewardMode::kW ? 1.0 : sentence_reward;
  std::vector<double> out(word_rewards.size());
  double tail = 0.0;
  for (std::size_t i = word_rewards.size(); i-- > 0;) {
    const double w = mode == RewardMode::kS ? 1.0 : word_rewards[i];
    tail += std::pow(gamma, static_cast<double>(i)) * s * w;
    out[i] = tail;
  }
  return out;
}

RewardBundle assemble_returns(const Grid& word_rewards, const std::vector<double>& sentence_rewards,
                              double gamma, RewardMode mode) {
  validate_gamma(gamma);
  if (word_rewards.size() != sentence_rewards.size()) {
    throw ContractViolation("assemble_returns: one sentence reward per sentence required");
  }
  RewardBundle b{word_rewards, sentence_rewards, {}, gamma, mode};
  b.returns.reserve(word_rewards.size());
  for (std::size_t t = 0; t < word_rewards.size(); ++t) {
    b.returns.push_back(sentence_returns(word_rewards[t], sentence_rewards[t], gamma, mode));
  }
  return b;
}

RewardBundle lm_rewards(const disc::LmDiscriminator& d, const Text& text, double gamma,
                        RewardMode mode) {
  Grid words = disc::lm_text_word_rewards(d, text);
  std::vector<double> sentences;
  sentences.reserve(words.size());
  for (const auto& w : words) sentences.push_back(sentence_reward(w));
  return assemble_returns(words, sentences, gamma, mode);
}

Grid policy_weights(const Grid& returns, double gamma) {
  validate_gamma(gamma);
  Grid out = returns;
  for (auto& row : out)
    for (std::size_t k = 0; k < row.size(); ++k) row[k] *= std::pow(gamma, static_cast<double>(k));
  return out;
}

}  // namespace dpgan::rewards
