// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSMIN_SET_FUNCTION_HPP
#define DSMIN_SET_FUNCTION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dsmin/subset.hpp"

namespace dsmin {

// A normalized set-function evaluation oracle: eval({}) == 0.
// Handles are immutable after construction and safe for concurrent
// read-only evaluation.
struct SetFunction {
  GroundSet ground{1};
  std::function<double(const Subset&)> eval;
  std::optional<bool> nondecreasing;
  // Upper bound on max_X |F(X)|, when known.
  std::optional<double> value_bound;
  // Set by make_modular; lets solvers use closed forms where valid.
  std::optional<std::vector<double>> modular_weights;
};

inline double evaluate(const SetFunction& f, const Subset& x) {
  if (x.ground_size() != f.ground.d)
    throw std::invalid_argument("evaluate: subset ground size mismatch");
  return f.eval(x);
}

// F(i | X) = F(X u {i}) - F(X). Zero when i is already in X.
inline double marginal_gain(const SetFunction& f, int i, const Subset& x) {
  if (i < 0 || i >= f.ground.d)
    throw std::invalid_argument("marginal_gain: element out of range");
  if (x.contains(i)) return 0.0;
  return evaluate(f, x.with(i)) - evaluate(f, x);
}

// Modular set function x(A) = sum_{i in A} w_i.
inline SetFunction make_modular(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("make_modular: empty weights");
  SetFunction f;
  f.ground = GroundSet(static_cast<int>(weights.size()));
  auto w = std::make_shared<std::vector<double>>(weights);
  f.eval = [w](const Subset& x) {
    double s = 0.0;
    for (int e : x.elements()) s += (*w)[static_cast<std::size_t>(e)];
    return s;
  };
  bool nondec = true;
  double bound = 0.0;
  for (double wi : weights) {
    if (wi < 0.0) nondec = false;
    bound += std::abs(wi);
  }
  f.nondecreasing = nondec;
  f.value_bound = bound;
  f.modular_weights = weights;
  return f;
}

// F = G - H on a shared ground set.
inline SetFunction difference(const SetFunction& g, const SetFunction& h) {
  if (g.ground.d != h.ground.d)
    throw std::invalid_argument("difference: ground set mismatch");
  SetFunction f;
  f.ground = g.ground;
  auto ge = g.eval, he = h.eval;
  f.eval = [ge, he](const Subset& x) { return ge(x) - he(x); };
  if (g.value_bound && h.value_bound) f.value_bound = *g.value_bound + *h.value_bound;
  return f;
}

inline SetFunction sum(const SetFunction& a, const SetFunction& b) {
  if (a.ground.d != b.ground.d) throw std::invalid_argument("sum: ground set mismatch");
  SetFunction f;
  f.ground = a.ground;
  auto ae = a.eval, be = b.eval;
  f.eval = [ae, be](const Subset& x) { return ae(x) + be(x); };
  if (a.nondecreasing && b.nondecreasing)
    f.nondecreasing = *a.nondecreasing && *b.nondecreasing;
  if (a.value_bound && b.value_bound) f.value_bound = *a.value_bound + *b.value_bound;
  return f;
}

inline SetFunction negate(const SetFunction& a) {
  SetFunction f;
  f.ground = a.ground;
  auto ae = a.eval;
  f.eval = [ae](const Subset& x) { return -ae(x); };
  f.value_bound = a.value_bound;
  return f;
}

// A DS decomposition F = G - H with G, H normalized submodular, plus the
// regularization weight used by the DC components.
struct DSInstance {
  SetFunction G;
  SetFunction H;
  double rho = 0.0;

  int d() const { return G.ground.d; }
  double objective(const Subset& x) const { return evaluate(G, x) - evaluate(H, x); }
  SetFunction objective_handle() const { return difference(G, H); }
};

}  // namespace dsmin

#endif  // DSMIN_SET_FUNCTION_HPP
