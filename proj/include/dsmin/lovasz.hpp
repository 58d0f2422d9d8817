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

#ifndef DSMIN_LOVASZ_HPP
#define DSMIN_LOVASZ_HPP

#include <optional>
#include <vector>

#include "dsmin/set_function.hpp"

namespace dsmin {

// A permutation of V, stored as order[k] = element at rank k.
struct Permutation {
  std::vector<int> order;

  int size() const { return static_cast<int>(order.size()); }

  // Prefix set S_k = {order[0], ..., order[k-1]}; S_0 is empty, S_d = V.
  Subset prefix(int k) const {
    Subset s(size());
    for (int j = 0; j < k; ++j) s.add(order[static_cast<std::size_t>(j)]);
    return s;
  }
};

// A vertex of the base polyhedron B(F), together with the permutation that
// generated it through the greedy rule.
struct BasePoint {
  std::vector<double> y;
  Permutation source;
};

struct RoundedSet {
  Subset set;
  double value = 0.0;
  int chain_index = 0;  // the chosen prefix length
};

// Sorts elements by decreasing x value. Ties are broken by decreasing
// tie_break, then by ascending element index, so results are deterministic.
// Comparisons are exact floating-point.
Permutation sort_decreasing(const std::vector<double>& x,
                            const std::vector<double>* tie_break = nullptr);

// f_L(x) = sum_k x_{sigma(k)} F(sigma(k) | S_{k-1}). The value does not
// depend on how ties in x are broken.
double lovasz_eval(const SetFunction& f, const std::vector<double>& x);

// Greedy rule along sigma: y_{sigma(k)} = F(sigma(k) | S_{k-1}).
BasePoint greedy_subgradient(const SetFunction& f, const Permutation& sigma);

// Best prefix of the sorted chain of x: never worse than f_L(x). Ties pick
// the smallest prefix.
RoundedSet round_f(const SetFunction& f, const std::vector<double>& x);

// Lipschitz constant of f_L: F(V) when F is nondecreasing, otherwise
// 3 * value_bound. Throws when neither is available.
double lipschitz_bound(const SetFunction& f);

}  // namespace dsmin

#endif  // DSMIN_LOVASZ_HPP
