#pragma once

// Test-only reference computations. Nothing here calls into the code paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dpgan/numerics/graph.hpp"

namespace oracle {

// Central finite differences of `loss` with respect to every entry of `p`.
inline dpgan::num::Tensor central_difference(const std::function<double()>& loss,
                                             dpgan::num::Parameter& p, double step = 1e-5) {
  dpgan::num::Tensor out(p.value.shape(), 0.0);
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    const double orig = p.value[i];
    p.value[i] = orig + step;
    const double up = loss();
    p.value[i] = orig - step;
    const double down = loss();
    p.value[i] = orig;
    out[i] = (up - down) / (2.0 * step);
  }
  return out;
}

// ||a - b|| / max(||a||, ||b||), with a tiny floor so two zero tensors agree.
inline double relative_error(const dpgan::num::Tensor& a, const dpgan::num::Tensor& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max({std::sqrt(na), std::sqrt(nb), 1e-10});
  return std::sqrt(diff) / scale;
}

}  // namespace oracle
