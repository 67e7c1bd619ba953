#include "dpgan/numerics/lstm.hpp"

#include "dpgan/numerics/ops.hpp"

namespace dpgan::num {

LstmCell::LstmCell(const std::string& name, std::size_t input, std::size_t hidden,
                   double init_scale, Rng& rng)
    : weight{name + ".weight", uniform_tensor({4 * hidden, input + hidden}, init_scale, rng)},
      bias{name + ".bias", uniform_tensor({4 * hidden}, init_scale, rng)} {}

LstmState LstmCell::step(Graph& g, Var x, LstmState prev) const {
  const std::size_t h = hidden();
  Var gates = add(matmul(g.param(weight), concat({x, prev.h})), g.param(bias));
  Var i = sigmoid(slice(gates, 0, h));
  Var f = sigmoid(slice(gates, h, h));
  Var cand = tanh(slice(gates, 2 * h, h));
  Var o = sigmoid(slice(gates, 3 * h, h));
  Var c = add(mul(f, prev.c), mul(i, cand));
  return {mul(o, tanh(c)), c};
}

LstmState LstmCell::zero_state(Graph& g) const {
  return {g.constant(Tensor({hidden()})), g.constant(Tensor({hidden()}))};
}

}  // namespace dpgan::num
