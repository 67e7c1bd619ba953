#include "dpgan/numerics/graph.hpp"

#include "dpgan/errors.hpp"

namespace dpgan::num {

const Tensor* Gradients::find(const Parameter& p) const {
  auto it = grads_.find(&p);
  return it == grads_.end() ? nullptr : &it->second;
}

void Gradients::insert(const Parameter& p, Tensor grad) { grads_[&p] = std::move(grad); }

const Tensor& Var::value() const {
  if (graph == nullptr) throw ContractViolation("use of an unbound Var");
  return graph->value(id);
}

Var Graph::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Graph::param(const Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return {this, it->second};
  Node n;
  n.op = "parameter";
  n.external = &p.value;
  n.parameter = &p;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  param_nodes_.emplace(&p, nodes_.size() - 1);
  return {this, nodes_.size() - 1};
}

Tensor& Graph::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(value(id).shape(), 0.0);
  return n.grad;
}

void Graph::check_owned(Var v, const char* op) const {
  if (v.graph != this || v.id >= nodes_.size()) {
    throw ContractViolation(std::string(op) + ": operand belongs to a different graph");
  }
}

Var Graph::record(const char* op, Tensor value, std::initializer_list<Var> inputs, BackwardFn fn,
                  std::size_t aux) {
  if (inputs.size() > 3) throw ContractViolation("record: use record_many for >3 operands");
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.aux = aux;
  n.backward = fn;
  for (Var v : inputs) {
    check_owned(v, op);
    n.inputs[n.input_count++] = v.id;
    n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
  }
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Graph::record_many(const char* op, Tensor value, const std::vector<Var>& inputs,
                       BackwardFn fn, std::size_t aux) {
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.aux = aux;
  n.backward = fn;
  n.many.reserve(inputs.size());
  for (Var v : inputs) {
    check_owned(v, op);
    n.many.push_back(v.id);
    n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
  }
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Gradients Graph::backward(Var loss) {
  check_owned(loss, "backward");
  if (value(loss.id).size() != 1) {
    throw ContractViolation("backward: loss must be a scalar, got shape " +
                            shape_string(value(loss.id).shape()));
  }
  for (auto& n : nodes_) n.grad = Tensor();

  Gradients out;
  if (!nodes_[loss.id].requires_grad) return out;
  grad(loss.id)[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.parameter) out.insert(*n.parameter, n.grad);
  }
  return out;
}

Gradients backward(Graph& graph, Var loss) { return graph.backward(loss); }

}  // namespace dpgan::num
