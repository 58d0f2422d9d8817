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

#include "dsmin/lovasz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dsmin {

Permutation sort_decreasing(const std::vector<double>& x,
                            const std::vector<double>* tie_break) {
  for (double v : x)
    if (std::isnan(v)) throw std::invalid_argument("sort_decreasing: NaN entry");
  if (tie_break && tie_break->size() != x.size())
    throw std::invalid_argument("sort_decreasing: tie_break length mismatch");

  Permutation sigma;
  sigma.order.resize(x.size());
  std::iota(sigma.order.begin(), sigma.order.end(), 0);
  std::sort(sigma.order.begin(), sigma.order.end(), [&](int a, int b) {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    if (x[ua] != x[ub]) return x[ua] > x[ub];
    if (tie_break && (*tie_break)[ua] != (*tie_break)[ub])
      return (*tie_break)[ua] > (*tie_break)[ub];
    return a < b;
  });
  return sigma;
}

double lovasz_eval(const SetFunction& f, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != f.ground.d)
    throw std::invalid_argument("lovasz_eval: dimension mismatch");
  const Permutation sigma = sort_decreasing(x);
  Subset s(f.ground.d);
  double prev = 0.0;  // F(empty) = 0 by normalization
  double acc = 0.0;
  for (int k = 0; k < f.ground.d; ++k) {
    const int e = sigma.order[static_cast<std::size_t>(k)];
    s.add(e);
    const double cur = evaluate(f, s);
    acc += x[static_cast<std::size_t>(e)] * (cur - prev);
    prev = cur;
  }
  return acc;
}

BasePoint greedy_subgradient(const SetFunction& f, const Permutation& sigma) {
  if (sigma.size() != f.ground.d)
    throw std::invalid_argument("greedy_subgradient: permutation size mismatch");
  BasePoint bp;
  bp.source = sigma;
  bp.y.assign(static_cast<std::size_t>(f.ground.d), 0.0);
  Subset s(f.ground.d);
  double prev = 0.0;
  for (int k = 0; k < f.ground.d; ++k) {
    const int e = sigma.order[static_cast<std::size_t>(k)];
    s.add(e);
    const double cur = evaluate(f, s);
    bp.y[static_cast<std::size_t>(e)] = cur - prev;
    prev = cur;
  }
  return bp;
}

RoundedSet round_f(const SetFunction& f, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != f.ground.d)
    throw std::invalid_argument("round_f: dimension mismatch");
  constexpr double kBoxSlack = 1e-9;
  std::vector<double> clipped(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || x[i] < -kBoxSlack || x[i] > 1.0 + kBoxSlack)
      throw std::invalid_argument("round_f: point outside [0,1]^d");
    clipped[i] = std::clamp(x[i], 0.0, 1.0);
  }

  const Permutation sigma = sort_decreasing(clipped);
  RoundedSet best;
  best.set = Subset(f.ground.d);
  best.value = 0.0;  // F(empty)
  best.chain_index = 0;
  Subset s(f.ground.d);
  for (int k = 1; k <= f.ground.d; ++k) {
    s.add(sigma.order[static_cast<std::size_t>(k - 1)]);
    const double v = evaluate(f, s);
    if (v < best.value) {
      best.set = s;
      best.value = v;
      best.chain_index = k;
    }
  }
  return best;
}

double lipschitz_bound(const SetFunction& f) {
  if (f.nondecreasing.value_or(false))
    return evaluate(f, Subset::full(f.ground.d));
  if (f.value_bound) return 3.0 * *f.value_bound;
  throw std::runtime_error(
      "lipschitz_bound: needs nondecreasing flag or value_bound");
}

}  // namespace dsmin
