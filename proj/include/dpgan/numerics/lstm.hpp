#pragma once

#include <cstddef>
#include <string>

#include "dpgan/numerics/graph.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::num {

struct LstmState {
  Var h;
  Var c;
};

// Single-layer LSTM cell. Gate pre-activations are W [x; h] + b with the
// 4H rows laid out as input, forget, candidate, output.
struct LstmCell {
  Parameter weight;  // {4H, input + H}
  Parameter bias;    // {4H}

  LstmCell() = default;
  LstmCell(const std::string& name, std::size_t input, std::size_t hidden, double init_scale,
           Rng& rng);

  std::size_t hidden() const { return bias.value.size() / 4; }
  std::size_t input() const { return weight.value.cols() - hidden(); }

  LstmState step(Graph& g, Var x, LstmState prev) const;
  // Zero h and c as graph constants.
  LstmState zero_state(Graph& g) const;
};

}  // namespace dpgan::num
