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

#include "dsmin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dsmin/lovasz.hpp"

namespace dsmin {

namespace {

void require_cap(int d, int cap, const char* who) {
  if (d > cap)
    throw std::runtime_error(std::string(who) + ": unsupported, d=" +
                             std::to_string(d) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

std::vector<double> value_table(const SetFunction& f) {
  const int d = f.ground.d;
  require_cap(d, 20, "value_table");
  const std::uint32_t n = 1u << d;
  std::vector<double> table(n);
  for (std::uint32_t m = 0; m < n; ++m)
    table[m] = evaluate(f, Subset::from_mask(m, d));
  return table;
}

OracleReport brute_force_min(const SetFunction& f) {
  const int d = f.ground.d;
  require_cap(d, 20, "brute_force_min");
  const std::vector<double> table = value_table(f);
  OracleReport rep;
  rep.global_min_value = table[0];
  for (double v : table) rep.global_min_value = std::min(rep.global_min_value, v);
  for (std::uint32_t m = 0; m < table.size(); ++m)
    if (table[m] == rep.global_min_value)
      rep.global_minimizers.push_back(Subset::from_mask(m, d));
  return rep;
}

LocalMinReport is_local_min(const SetFunction& f, const Subset& x, double eps) {
  const double fx = evaluate(f, x);
  LocalMinReport rep;
  rep.is_minimum = true;
  for (int i = 0; i < f.ground.d; ++i) {
    const Subset flipped = x.contains(i) ? x.without(i) : x.with(i);
    if (evaluate(f, flipped) < fx - eps) {
      rep.is_minimum = false;
      rep.witness = flipped;
      return rep;
    }
  }
  return rep;
}

LocalMinReport is_strong_local_min(const SetFunction& f, const Subset& x, double eps) {
  const int d = f.ground.d;
  const int in = x.size(), out = d - in;
  if (in > 20 || out > 20 || (1u << in) + (1u << out) > (1u << 20))
    throw std::runtime_error("is_strong_local_min: unsupported subset size");

  const double fx = evaluate(f, x);
  LocalMinReport rep;
  rep.is_minimum = true;

  const std::vector<int> members = x.elements();
  for (std::uint32_t m = 0; m < (1u << in); ++m) {
    Subset y(d);
    for (int j = 0; j < in; ++j)
      if ((m >> j) & 1u) y.add(members[static_cast<std::size_t>(j)]);
    if (evaluate(f, y) < fx - eps) {
      rep.is_minimum = false;
      rep.witness = y;
      return rep;
    }
  }
  const std::vector<int> outside = x.complement().elements();
  for (std::uint32_t m = 0; m < (1u << out); ++m) {
    Subset y = x;
    for (int j = 0; j < out; ++j)
      if ((m >> j) & 1u) y.add(outside[static_cast<std::size_t>(j)]);
    if (evaluate(f, y) < fx - eps) {
      rep.is_minimum = false;
      rep.witness = y;
      return rep;
    }
  }
  return rep;
}

std::pair<double, double> weak_dr_constants(const SetFunction& f) {
  const int d = f.ground.d;
  require_cap(d, 12, "weak_dr_constants");
  if (!f.nondecreasing.value_or(false))
    throw std::runtime_error("weak_dr_constants: requires a nondecreasing handle");

  const std::vector<double> table = value_table(f);
  const std::uint32_t n = 1u << d;
  double alpha = 1.0, beta = 1.0;
  // Enumerate B, then i outside B, then A as a submask of B.
  for (std::uint32_t b = 0; b < n; ++b) {
    for (int i = 0; i < d; ++i) {
      if ((b >> i) & 1u) continue;
      const double gain_b = table[b | (1u << i)] - table[b];
      std::uint32_t a = b;
      while (true) {
        const double gain_a = table[a | (1u << i)] - table[a];
        if (gain_b > 0.0) alpha = std::min(alpha, gain_a / gain_b);
        if (gain_a > 0.0) beta = std::min(beta, gain_b / gain_a);
        if (a == 0) break;
        a = (a - 1) & b;
      }
    }
  }
  alpha = std::clamp(alpha, 0.0, 1.0);
  beta = std::clamp(beta, 0.0, 1.0);
  return {alpha, beta};
}

SubmodularityReport check_submodular(const SetFunction& f) {
  const int d = f.ground.d;
  require_cap(d, 12, "check_submodular");
  const std::vector<double> table = value_table(f);
  const std::uint32_t n = 1u << d;
  SubmodularityReport rep;
  rep.is_submodular = true;
  for (std::uint32_t b = 0; b < n; ++b) {
    for (int i = 0; i < d; ++i) {
      if ((b >> i) & 1u) continue;
      const double gain_b = table[b | (1u << i)] - table[b];
      std::uint32_t a = b;
      while (true) {
        const double gain_a = table[a | (1u << i)] - table[a];
        if (gain_a < gain_b - 1e-12) {
          rep.is_submodular = false;
          rep.witness = {{Subset::from_mask(a, d), Subset::from_mask(b, d)}, i};
          return rep;
        }
        if (a == 0) break;
        a = (a - 1) & b;
      }
    }
  }
  return rep;
}

double lovasz_bruteforce(const SetFunction& f, const std::vector<double>& x) {
  const int d = f.ground.d;
  require_cap(d, 7, "lovasz_bruteforce");
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("lovasz_bruteforce: dimension mismatch");

  Permutation sigma;
  sigma.order.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) sigma.order[static_cast<std::size_t>(i)] = i;

  double best = -std::numeric_limits<double>::infinity();
  std::sort(sigma.order.begin(), sigma.order.end());
  do {
    const BasePoint bp = greedy_subgradient(f, sigma);
    double ip = 0.0;
    for (int i = 0; i < d; ++i)
      ip += x[static_cast<std::size_t>(i)] * bp.y[static_cast<std::size_t>(i)];
    best = std::max(best, ip);
  } while (std::next_permutation(sigma.order.begin(), sigma.order.end()));
  return best;
}

}  // namespace dsmin
