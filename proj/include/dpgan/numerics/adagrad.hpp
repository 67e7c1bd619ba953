#pragma once

#include <vector>

#include "dpgan/numerics/graph.hpp"

namespace dpgan::num {

// Dense gradient storage aligned with a ParameterList.
class GradientBuffer {
 public:
  explicit GradientBuffer(const ParameterList& params);

  // Adds scale * g for every parameter of the list present in `g`.
  void accumulate(const Gradients& g, double scale = 1.0);
  void zero();

  std::size_t size() const noexcept { return grads_.size(); }
  Tensor& operator[](std::size_t i) { return grads_[i]; }
  const Tensor& operator[](std::size_t i) const { return grads_[i]; }

  double global_norm() const;
  // Rescales all gradients so the global L2 norm is at most max_norm.
  // Returns the norm before clipping.
  double clip_global_norm(double max_norm);

 private:
  ParameterList params_;
  std::vector<Tensor> grads_;
};

struct AdagradConfig {
  double learning_rate = 0.1;
  double epsilon = 1e-10;
  double clip_norm = 5.0;  // <= 0 disables clipping
};

// Sum-of-squares accumulators, one per parameter.
struct OptimizerState {
  std::vector<Tensor> accumulators;
  bool initialized() const noexcept { return !accumulators.empty(); }
};

// accumulator += g^2; param -= lr * g / (sqrt(accumulator) + epsilon).
// Zero-initialises `state` on first use; throws ContractViolation when the
// parameter, gradient and accumulator sets are misaligned.
void adagrad_step(const ParameterList& params, const GradientBuffer& grads, OptimizerState& state,
                  const AdagradConfig& config);

class Adagrad {
 public:
  Adagrad() = default;
  explicit Adagrad(AdagradConfig config) : config_(config) {}

  // Clips `grads` in place (when enabled) and applies one update.
  // Returns the pre-clip gradient norm.
  double step(const ParameterList& params, GradientBuffer& grads);

  const AdagradConfig& config() const noexcept { return config_; }
  AdagradConfig& config() noexcept { return config_; }
  const OptimizerState& state() const noexcept { return state_; }
  OptimizerState& state() noexcept { return state_; }

 private:
  AdagradConfig config_;
  OptimizerState state_;
};

}  // namespace dpgan::num
