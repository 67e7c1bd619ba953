#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

#include "dpgan/numerics/tensor.hpp"

namespace dpgan::num {

using Rng = std::mt19937_64;

// splitmix64 finaliser; combines a base seed with stream tags so independent
// consumers (epochs, steps, samples) get decorrelated, reproducible streams.
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// Uniform double in [0, 1) built from the top 53 bits, identical on every platform.
double uniform01(Rng& rng);
// Uniform integer in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);
// Draws an index with probability proportional to weights[i] (non-negative, positive sum).
std::size_t sample_categorical(Rng& rng, std::span<const double> weights);
// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(Rng& rng, std::size_t n);

// Tensor with entries uniform in [-scale, scale].
Tensor uniform_tensor(Shape shape, double scale, Rng& rng);

}  // namespace dpgan::num
