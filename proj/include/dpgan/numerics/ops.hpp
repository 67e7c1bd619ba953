#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpgan/numerics/graph.hpp"

// Differentiable primitives. Every function records one node in the graph of
// its operands and throws ShapeError (naming the primitive) when operand
// shapes do not conform.
namespace dpgan::num {

// {r,k} x {k} -> {r};  {r,k} x {k,c} -> {r,c}
Var matmul(Var a, Var b);
Var transpose(Var a);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);

// Concatenation of rank 1 operands.
Var concat(const std::vector<Var>& parts);
// Stacks equal-length rank 1 operands as the rows of a matrix.
Var stack_rows(const std::vector<Var>& rows);
Var slice(Var a, std::size_t offset, std::size_t length);

Var sigmoid(Var a);
Var tanh(Var a);
Var exp(Var a);
// Natural log; operands must be strictly positive.
Var log(Var a);
Var log_sigmoid(Var a);

// Softmax over the last dimension (per row for matrices).
Var softmax(Var a);
Var log_softmax(Var a);

Var sum(Var a);
Var mean(Var a);
// Element `index` of a rank 1 tensor, as a scalar.
Var pick(Var a, std::size_t index);
// Row `id` of an embedding table {V,E}, as a rank 1 tensor {E}.
Var embedding(Var table, std::int64_t id);

// log softmax(logits)[target] for rank 1 logits.
Var log_prob(Var logits, std::int64_t target);
// -log softmax(logits)[target] for rank 1 logits.
Var cross_entropy(Var logits, std::int64_t target);
// Mean over rows with mask != 0 of -log softmax(logits[i])[targets[i]].
// Throws ContractViolation when the mask selects no rows.
Var masked_cross_entropy(Var logits, std::span<const std::int64_t> targets,
                         std::span<const double> mask);

// sum_i weights[i] * scalars[i].
Var weighted_sum(const std::vector<Var>& scalars, std::span<const double> weights);

// Log-softmax of a rank 1 span, shared by the primitives above so that
// values computed outside a graph agree bit for bit with graph values.
void log_softmax_into(std::span<const double> logits, std::span<double> out);

}  // namespace dpgan::num
