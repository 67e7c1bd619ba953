#pragma once

// Brute-force reward recomputations, written independently of the library.

#include <cmath>
#include <vector>

#include "dpgan/rewards/rewards.hpp"

namespace oracle {

// Direct double sum of discounted rewards from position k onwards.
inline std::vector<double> brute_returns(const std::vector<double>& w, double s, double gamma,
                                         dpgan::rewards::RewardMode mode) {
  using dpgan::rewards::RewardMode;
  std::vector<double> out;
  for (std::size_t k = 1; k <= w.size(); ++k) {
    double total = 0.0;
    for (std::size_t i = k; i <= w.size(); ++i) {
      const double word = mode == RewardMode::kS ? 1.0 : w[i - 1];
      const double sent = mode == RewardMode::kW ? 1.0 : s;
      total += std::pow(gamma, static_cast<double>(i - 1)) * sent * word;
    }
    out.push_back(total);
  }
  return out;
}

// -log softmax(bias)[id], summing the exponentials directly.
inline double neg_log_softmax(const std::vector<double>& bias, std::size_t id) {
  double z = 0.0;
  for (double b : bias) z += std::exp(b);
  return -std::log(std::exp(bias[id]) / z);
}

}  // namespace oracle
