#pragma once

#include <array>
#include <deque>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpgan/numerics/tensor.hpp"

namespace dpgan::num {

// A trainable tensor owned by a model. Graphs reference parameters by address,
// so a parameter must outlive every graph that uses it and must not be
// modified while such a graph is alive.
struct Parameter {
  std::string name;
  Tensor value;
};

using ParameterList = std::vector<Parameter*>;
using ConstParameterList = std::vector<const Parameter*>;

// d(loss)/d(parameter) for every parameter reached by a backward pass.
class Gradients {
 public:
  const Tensor* find(const Parameter& p) const;
  std::size_t size() const noexcept { return grads_.size(); }
  void insert(const Parameter& p, Tensor grad);

 private:
  std::unordered_map<const Parameter*, Tensor> grads_;
};

class Graph;

struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Tape of primitive applications in topological (creation) order.
// Single-threaded; independent graphs may be used from different threads.
class Graph {
 public:
  using BackwardFn = void (*)(Graph&, std::size_t node);

  struct Node {
    const char* op = "";
    Tensor value;
    Tensor grad;
    const Tensor* external = nullptr;
    const Parameter* parameter = nullptr;
    std::array<std::size_t, 3> inputs{};
    std::uint8_t input_count = 0;
    std::vector<std::size_t> many;  // operands of variadic primitives
    std::size_t aux = 0;
    Tensor saved;
    BackwardFn backward = nullptr;
    bool requires_grad = false;
  };

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaf that never receives a gradient.
  Var constant(Tensor value);
  // Leaf bound to a parameter. Repeated calls return the same node.
  Var param(const Parameter& p);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  Node& node(std::size_t id) { return nodes_[id]; }
  const Tensor& value(std::size_t id) const {
    const Node& n = nodes_[id];
    return n.external ? *n.external : n.value;
  }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Gradient accumulator of a node, zero-initialised on first access.
  Tensor& grad(std::size_t id);
  bool has_grad(std::size_t id) const { return !nodes_[id].grad.empty(); }

  // Appends a primitive application. Used by the op implementations.
  Var record(const char* op, Tensor value, std::initializer_list<Var> inputs, BackwardFn fn,
             std::size_t aux = 0);
  Var record_many(const char* op, Tensor value, const std::vector<Var>& inputs, BackwardFn fn,
                  std::size_t aux = 0);

  // Reverse sweep from a scalar node. Returns gradients for parameter leaves
  // only; constants receive nothing. May be called repeatedly.
  Gradients backward(Var loss);

 private:
  void check_owned(Var v, const char* op) const;

  std::deque<Node> nodes_;  // deque: node references survive appends
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

// Free-function spelling of Graph::backward.
Gradients backward(Graph& graph, Var loss);

}  // namespace dpgan::num
