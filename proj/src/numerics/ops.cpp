#include "dpgan/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpgan/errors.hpp"

namespace dpgan::num {

namespace {

using Node = Graph::Node;

[[noreturn]] void shape_error(const char* op, const std::string& detail) {
  throw ShapeError(op, detail);
}

void require_same_graph(const char* op, Var a, Var b) {
  if (a.graph == nullptr || a.graph != b.graph) shape_error(op, "operands from different graphs");
}

void require_rank(const char* op, const Tensor& t, std::size_t rank) {
  if (t.rank() != rank) {
    shape_error(op, "expected rank " + std::to_string(rank) + ", got " + shape_string(t.shape()));
  }
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    shape_error(op, shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
}

std::size_t in(const Graph& g, std::size_t node, int k) { return g.node(node).inputs[k]; }

// ---- matmul ---------------------------------------------------------------

void matmul_backward(Graph& g, std::size_t self) {
  const std::size_t ia = in(g, self, 0), ib = in(g, self, 1);
  const Tensor& a = g.value(ia);
  const Tensor& b = g.value(ib);
  const Tensor& gy = g.node(self).grad;
  const std::size_t r = a.rows(), k = a.cols();
  const std::size_t c = b.rank() == 1 ? 1 : b.cols();
  if (g.requires_grad(ia)) {
    Tensor& ga = g.grad(ia);
    for (std::size_t i = 0; i < r; ++i) {
      double* garow = ga.data() + i * k;
      for (std::size_t j = 0; j < c; ++j) {
        const double gij = gy[i * c + j];
        if (gij == 0.0) continue;
        for (std::size_t p = 0; p < k; ++p) garow[p] += gij * b[p * c + j];
      }
    }
  }
  if (g.requires_grad(ib)) {
    Tensor& gb = g.grad(ib);
    for (std::size_t i = 0; i < r; ++i) {
      const double* arow = a.data() + i * k;
      const double* gyrow = gy.data() + i * c;
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = arow[p];
        double* gbrow = gb.data() + p * c;
        for (std::size_t j = 0; j < c; ++j) gbrow[j] += aip * gyrow[j];
      }
    }
  }
}

void transpose_backward(Graph& g, std::size_t self) {
  const std::size_t ia = in(g, self, 0);
  const Tensor& gy = g.node(self).grad;
  Tensor& ga = g.grad(ia);
  const std::size_t r = ga.rows(), c = ga.cols();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += gy[j * r + i];
}

// ---- elementwise ----------------------------------------------------------

void add_backward(Graph& g, std::size_t self) {
  const Tensor& gy = g.node(self).grad;
  for (int k = 0; k < 2; ++k) {
    const std::size_t id = in(g, self, k);
    if (!g.requires_grad(id)) continue;
    Tensor& gx = g.grad(id);
    for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i];
  }
}

void sub_backward(Graph& g, std::size_t self) {
  const Tensor& gy = g.node(self).grad;
  const std::size_t ia = in(g, self, 0), ib = in(g, self, 1);
  if (g.requires_grad(ia)) {
    Tensor& ga = g.grad(ia);
    for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
  }
  if (g.requires_grad(ib)) {
    Tensor& gb = g.grad(ib);
    for (std::size_t i = 0; i < gy.size(); ++i) gb[i] -= gy[i];
  }
}

void mul_backward(Graph& g, std::size_t self) {
  const Tensor& gy = g.node(self).grad;
  const std::size_t ia = in(g, self, 0), ib = in(g, self, 1);
  const Tensor& a = g.value(ia);
  const Tensor& b = g.value(ib);
  if (g.requires_grad(ia)) {
    Tensor& ga = g.grad(ia);
    for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * b[i];
  }
  if (g.requires_grad(ib)) {
    Tensor& gb = g.grad(ib);
    for (std::size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i] * a[i];
  }
}

void scale_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  const double factor = n.saved[0];
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += factor * n.grad[i];
}

// ---- structural -----------------------------------------------------------

void concat_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  std::size_t offset = 0;
  for (std::size_t id : n.many) {
    const std::size_t len = g.value(id).size();
    if (g.requires_grad(id)) {
      Tensor& gx = g.grad(id);
      for (std::size_t i = 0; i < len; ++i) gx[i] += n.grad[offset + i];
    }
    offset += len;
  }
}

void slice_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < n.grad.size(); ++i) ga[n.aux + i] += n.grad[i];
}

void embedding_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& gt = g.grad(n.inputs[0]);
  const std::size_t e = n.grad.size();
  double* row = gt.data() + n.aux * e;
  for (std::size_t i = 0; i < e; ++i) row[i] += n.grad[i];
}

void pick_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  g.grad(n.inputs[0])[n.aux] += n.grad[0];
}

void sum_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  const double s = n.grad[0] * n.saved[0];
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += s;
}

// ---- nonlinearities -------------------------------------------------------

void sigmoid_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    const double y = n.value[i];
    ga[i] += n.grad[i] * y * (1.0 - y);
  }
}

void tanh_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    const double y = n.value[i];
    ga[i] += n.grad[i] * (1.0 - y * y);
  }
}

void exp_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += n.grad[i] * n.value[i];
}

void log_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  const Tensor& a = g.value(n.inputs[0]);
  Tensor& ga = g.grad(n.inputs[0]);
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += n.grad[i] / a[i];
}

void log_sigmoid_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  const Tensor& a = g.value(n.inputs[0]);
  Tensor& ga = g.grad(n.inputs[0]);
  // d/dx log sigmoid(x) = sigmoid(-x)
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += n.grad[i] / (1.0 + std::exp(a[i]));
}

void softmax_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  const std::size_t width = n.aux;
  for (std::size_t base = 0; base < ga.size(); base += width) {
    double dot = 0.0;
    for (std::size_t j = 0; j < width; ++j) dot += n.grad[base + j] * n.value[base + j];
    for (std::size_t j = 0; j < width; ++j)
      ga[base + j] += n.value[base + j] * (n.grad[base + j] - dot);
  }
}

void log_softmax_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  const std::size_t width = n.aux;
  for (std::size_t base = 0; base < ga.size(); base += width) {
    double total = 0.0;
    for (std::size_t j = 0; j < width; ++j) total += n.grad[base + j];
    for (std::size_t j = 0; j < width; ++j)
      ga[base + j] += n.grad[base + j] - std::exp(n.value[base + j]) * total;
  }
}

// saved holds the log-softmax of the logits.
void log_prob_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  const double gy = n.grad[0];
  for (std::size_t j = 0; j < ga.size(); ++j) ga[j] -= gy * std::exp(n.saved[j]);
  ga[n.aux] += gy;
}

// saved holds per-row weights mask_i / sum(mask) followed by the log-softmax rows.
void masked_ce_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  Tensor& ga = g.grad(n.inputs[0]);
  const std::size_t rows = ga.rows(), width = ga.cols();
  const double gy = n.grad[0];
  for (std::size_t i = 0; i < rows; ++i) {
    const double w = n.saved[i];
    if (w == 0.0) continue;
    const double* lsm = n.saved.data() + rows + i * width;
    double* grow = ga.data() + i * width;
    for (std::size_t j = 0; j < width; ++j) grow[j] += gy * w * std::exp(lsm[j]);
    // target index is stored alongside the weights in the trailing block
    const auto target = static_cast<std::size_t>(n.saved[rows + rows * width + i]);
    grow[target] -= gy * w;
  }
}

void weighted_sum_backward(Graph& g, std::size_t self) {
  const Node& n = g.node(self);
  for (std::size_t i = 0; i < n.many.size(); ++i) {
    const std::size_t id = n.many[i];
    if (g.requires_grad(id)) g.grad(id)[0] += n.grad[0] * n.saved[i];
  }
}

Tensor map_values(const Tensor& a, double (*fn)(double)) {
  Tensor out = a;
  for (auto& v : out.values()) v = fn(v);
  return out;
}

double sigmoid_value(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid_value(double x) {
  // log sigmoid(x) = -softplus(-x)
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace

void log_softmax_into(std::span<const double> logits, std::span<double> out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits) mx = std::max(mx, v);
  double total = 0.0;
  for (double v : logits) total += std::exp(v - mx);
  const double lse = mx + std::log(total);
  for (std::size_t j = 0; j < logits.size(); ++j) out[j] = logits[j] - lse;
}

Var matmul(Var a, Var b) {
  require_same_graph("matmul", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank("matmul", av, 2);
  if (bv.rank() != 1 && bv.rank() != 2) shape_error("matmul", "right operand must be rank 1 or 2");
  const std::size_t r = av.rows(), k = av.cols();
  if (bv.rows() != k) {
    shape_error("matmul", shape_string(av.shape()) + " x " + shape_string(bv.shape()));
  }
  const std::size_t c = bv.rank() == 1 ? 1 : bv.cols();
  Tensor out = bv.rank() == 1 ? Tensor({r}) : Tensor({r, c});
  for (std::size_t i = 0; i < r; ++i) {
    const double* arow = av.data() + i * k;
    double* orow = out.data() + i * c;
    if (c == 1) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * bv[p];
      orow[0] = acc;
    } else {
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = arow[p];
        const double* brow = bv.data() + p * c;
        for (std::size_t j = 0; j < c; ++j) orow[j] += aip * brow[j];
      }
    }
  }
  return a.graph->record("matmul", std::move(out), {a, b}, matmul_backward);
}

Var transpose(Var a) {
  const Tensor& av = a.value();
  require_rank("transpose", av, 2);
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  return a.graph->record("transpose", std::move(out), {a}, transpose_backward);
}

Var add(Var a, Var b) {
  require_same_graph("add", a, b);
  require_same_shape("add", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.graph->record("add", std::move(out), {a, b}, add_backward);
}

Var sub(Var a, Var b) {
  require_same_graph("sub", a, b);
  require_same_shape("sub", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return a.graph->record("sub", std::move(out), {a, b}, sub_backward);
}

Var mul(Var a, Var b) {
  require_same_graph("mul", a, b);
  require_same_shape("mul", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return a.graph->record("mul", std::move(out), {a, b}, mul_backward);
}

Var scale(Var a, double factor) {
  Tensor out = a.value();
  for (auto& v : out.values()) v *= factor;
  Var y = a.graph->record("scale", std::move(out), {a}, scale_backward);
  y.graph->node(y.id).saved = Tensor::scalar(factor);
  return y;
}

Var concat(const std::vector<Var>& parts) {
  if (parts.empty()) shape_error("concat", "no operands");
  std::size_t total = 0;
  for (Var p : parts) {
    require_same_graph("concat", parts[0], p);
    require_rank("concat", p.value(), 1);
    total += p.value().size();
  }
  std::vector<double> values;
  values.reserve(total);
  for (Var p : parts) {
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return parts[0].graph->record_many("concat", Tensor::vector(std::move(values)), parts,
                                     concat_backward);
}

Var stack_rows(const std::vector<Var>& rows) {
  if (rows.empty()) shape_error("stack_rows", "no operands");
  const std::size_t width = rows[0].value().size();
  std::vector<double> values;
  values.reserve(rows.size() * width);
  for (Var r : rows) {
    require_same_graph("stack_rows", rows[0], r);
    require_rank("stack_rows", r.value(), 1);
    if (r.value().size() != width) shape_error("stack_rows", "rows of unequal length");
    const auto v = r.value().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  // Row-major stacking is the same memory layout as concatenation.
  return rows[0].graph->record_many("stack_rows",
                                    Tensor::matrix(rows.size(), width, std::move(values)), rows,
                                    concat_backward);
}

Var slice(Var a, std::size_t offset, std::size_t length) {
  const Tensor& av = a.value();
  require_rank("slice", av, 1);
  if (length == 0 || offset + length > av.size()) {
    shape_error("slice", "range [" + std::to_string(offset) + ", " +
                             std::to_string(offset + length) + ") outside " +
                             shape_string(av.shape()));
  }
  std::vector<double> values(av.values().begin() + static_cast<std::ptrdiff_t>(offset),
                             av.values().begin() + static_cast<std::ptrdiff_t>(offset + length));
  return a.graph->record("slice", Tensor::vector(std::move(values)), {a}, slice_backward, offset);
}

Var sigmoid(Var a) {
  return a.graph->record("sigmoid", map_values(a.value(), sigmoid_value), {a}, sigmoid_backward);
}

Var tanh(Var a) {
  return a.graph->record("tanh", map_values(a.value(), [](double x) { return std::tanh(x); }),
                         {a}, tanh_backward);
}

Var exp(Var a) {
  return a.graph->record("exp", map_values(a.value(), [](double x) { return std::exp(x); }), {a},
                         exp_backward);
}

Var log(Var a) {
  for (double v : a.value().values()) {
    if (!(v > 0.0)) throw ContractViolation("log: operand must be strictly positive");
  }
  return a.graph->record("log", map_values(a.value(), [](double x) { return std::log(x); }), {a},
                         log_backward);
}

Var log_sigmoid(Var a) {
  return a.graph->record("log_sigmoid", map_values(a.value(), log_sigmoid_value), {a},
                         log_sigmoid_backward);
}

Var softmax(Var a) {
  const Tensor& av = a.value();
  if (av.rank() > 2) shape_error("softmax", "rank must be 1 or 2");
  const std::size_t width = av.rank() == 1 ? av.size() : av.cols();
  Tensor out(av.shape());
  for (std::size_t base = 0; base < av.size(); base += width) {
    log_softmax_into(av.values().subspan(base, width), out.values().subspan(base, width));
    for (std::size_t j = 0; j < width; ++j) out[base + j] = std::exp(out[base + j]);
  }
  return a.graph->record("softmax", std::move(out), {a}, softmax_backward, width);
}

Var log_softmax(Var a) {
  const Tensor& av = a.value();
  if (av.rank() > 2) shape_error("log_softmax", "rank must be 1 or 2");
  const std::size_t width = av.rank() == 1 ? av.size() : av.cols();
  Tensor out(av.shape());
  for (std::size_t base = 0; base < av.size(); base += width) {
    log_softmax_into(av.values().subspan(base, width), out.values().subspan(base, width));
  }
  return a.graph->record("log_softmax", std::move(out), {a}, log_softmax_backward, width);
}

Var sum(Var a) {
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  Var y = a.graph->record("sum", Tensor::scalar(total), {a}, sum_backward);
  y.graph->node(y.id).saved = Tensor::scalar(1.0);
  return y;
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  Var y = a.graph->record("mean", Tensor::scalar(total / n), {a}, sum_backward);
  y.graph->node(y.id).saved = Tensor::scalar(1.0 / n);
  return y;
}

Var pick(Var a, std::size_t index) {
  const Tensor& av = a.value();
  require_rank("pick", av, 1);
  if (index >= av.size()) {
    shape_error("pick", "index " + std::to_string(index) + " outside " + shape_string(av.shape()));
  }
  return a.graph->record("pick", Tensor::scalar(av[index]), {a}, pick_backward, index);
}

Var embedding(Var table, std::int64_t id) {
  const Tensor& tv = table.value();
  require_rank("embedding", tv, 2);
  if (id < 0 || static_cast<std::size_t>(id) >= tv.rows()) {
    shape_error("embedding", "id " + std::to_string(id) + " outside table " +
                                 shape_string(tv.shape()));
  }
  const std::size_t e = tv.cols();
  const auto row = static_cast<std::size_t>(id);
  std::vector<double> values(tv.data() + row * e, tv.data() + (row + 1) * e);
  return table.graph->record("embedding", Tensor::vector(std::move(values)), {table},
                             embedding_backward, row);
}

Var log_prob(Var logits, std::int64_t target) {
  const Tensor& lv = logits.value();
  require_rank("log_prob", lv, 1);
  if (target < 0 || static_cast<std::size_t>(target) >= lv.size()) {
    shape_error("log_prob", "target " + std::to_string(target) + " outside " +
                                shape_string(lv.shape()));
  }
  Tensor lsm(lv.shape());
  log_softmax_into(lv.values(), lsm.values());
  const auto t = static_cast<std::size_t>(target);
  Var y = logits.graph->record("log_prob", Tensor::scalar(lsm[t]), {logits}, log_prob_backward, t);
  y.graph->node(y.id).saved = std::move(lsm);
  return y;
}

Var cross_entropy(Var logits, std::int64_t target) {
  return scale(log_prob(logits, target), -1.0);
}

Var masked_cross_entropy(Var logits, std::span<const std::int64_t> targets,
                         std::span<const double> mask) {
  const Tensor& lv = logits.value();
  require_rank("masked_cross_entropy", lv, 2);
  const std::size_t rows = lv.rows(), width = lv.cols();
  if (targets.size() != rows || mask.size() != rows) {
    shape_error("masked_cross_entropy", "targets/mask length must equal rows of " +
                                            shape_string(lv.shape()));
  }
  double mass = 0.0;
  for (double m : mask) mass += m;
  if (!(mass > 0.0)) throw ContractViolation("masked_cross_entropy: mask selects no rows");

  // saved layout: [weights (rows)] [log-softmax (rows*width)] [targets (rows)]
  Tensor saved({rows + rows * width + rows});
  double loss = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto t = targets[i];
    if (t < 0 || static_cast<std::size_t>(t) >= width) {
      shape_error("masked_cross_entropy", "target " + std::to_string(t) + " outside width " +
                                              std::to_string(width));
    }
    const double w = mask[i] / mass;
    saved[i] = w;
    saved[rows + rows * width + i] = static_cast<double>(t);
    auto lsm = saved.values().subspan(rows + i * width, width);
    log_softmax_into(lv.values().subspan(i * width, width), lsm);
    if (w != 0.0) loss -= w * lsm[static_cast<std::size_t>(t)];
  }
  Var y = logits.graph->record("masked_cross_entropy", Tensor::scalar(loss), {logits},
                               masked_ce_backward);
  y.graph->node(y.id).saved = std::move(saved);
  return y;
}

Var weighted_sum(const std::vector<Var>& scalars, std::span<const double> weights) {
  if (scalars.empty()) shape_error("weighted_sum", "no operands");
  if (scalars.size() != weights.size()) shape_error("weighted_sum", "weights length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    require_same_graph("weighted_sum", scalars[0], scalars[i]);
    const Tensor& v = scalars[i].value();
    if (v.size() != 1) shape_error("weighted_sum", "operands must be scalars");
    total += weights[i] * v[0];
  }
  Var y = scalars[0].graph->record_many("weighted_sum", Tensor::scalar(total), scalars,
                                        weighted_sum_backward);
  y.graph->node(y.id).saved = Tensor::vector(std::vector<double>(weights.begin(), weights.end()));
  return y;
}

}  // namespace dpgan::num
