#include "dpgan/numerics/adagrad.hpp"

#include <cmath>
#include <string>

#include "dpgan/errors.hpp"

namespace dpgan::num {

GradientBuffer::GradientBuffer(const ParameterList& params) : params_(params) {
  grads_.reserve(params.size());
  for (const Parameter* p : params) grads_.emplace_back(p->value.shape(), 0.0);
}

void GradientBuffer::accumulate(const Gradients& g, double scale) {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Tensor* gi = g.find(*params_[i]);
    if (gi == nullptr) continue;
    Tensor& dst = grads_[i];
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += scale * (*gi)[j];
  }
}

void GradientBuffer::zero() {
  for (auto& g : grads_) g.fill(0.0);
}

double GradientBuffer::global_norm() const {
  double total = 0.0;
  for (const auto& g : grads_)
    for (double v : g.values()) total += v * v;
  return std::sqrt(total);
}

double GradientBuffer::clip_global_norm(double max_norm) {
  const double norm = global_norm();
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (auto& g : grads_)
      for (auto& v : g.values()) v *= factor;
  }
  return norm;
}

void adagrad_step(const ParameterList& params, const GradientBuffer& grads, OptimizerState& state,
                  const AdagradConfig& config) {
  if (grads.size() != params.size()) {
    throw ContractViolation("adagrad_step: " + std::to_string(params.size()) + " parameters but " +
                            std::to_string(grads.size()) + " gradients");
  }
  if (!state.initialized()) {
    for (const Parameter* p : params) state.accumulators.emplace_back(p->value.shape(), 0.0);
  }
  if (state.accumulators.size() != params.size()) {
    throw ContractViolation("adagrad_step: optimizer state holds " +
                            std::to_string(state.accumulators.size()) + " accumulators for " +
                            std::to_string(params.size()) + " parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& value = params[i]->value;
    const Tensor& g = grads[i];
    Tensor& acc = state.accumulators[i];
    if (g.shape() != value.shape() || acc.shape() != value.shape()) {
      throw ContractViolation("adagrad_step: shape mismatch for parameter '" + params[i]->name + "'");
    }
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double gj = g[j];
      if (gj == 0.0) continue;
      acc[j] += gj * gj;
      value[j] -= config.learning_rate * gj / (std::sqrt(acc[j]) + config.epsilon);
    }
  }
}

double Adagrad::step(const ParameterList& params, GradientBuffer& grads) {
  const double norm = grads.clip_global_norm(config_.clip_norm);
  adagrad_step(params, grads, state_, config_);
  return norm;
}

}  // namespace dpgan::num
