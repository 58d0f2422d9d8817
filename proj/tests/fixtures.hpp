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

#ifndef DSMIN_TESTS_FIXTURES_HPP
#define DSMIN_TESTS_FIXTURES_HPP

#include <vector>

#include "dsmin/instances.hpp"
#include "dsmin/rng.hpp"
#include "dsmin/set_function.hpp"

namespace dsmin::testing {

// d=3 instance: G(X) = alpha|X|, H a nested set cover. The global minimum
// is -2*alpha at {2}; the chain of (1, 0.5, 0) rounds to sets of value 0.
inline DSInstance tiny_a(double alpha = 1.0, double rho = 0.0) {
  DSInstance inst;
  inst.G = make_modular({alpha, alpha, alpha});
  inst.H = make_set_cover(3, {{0}, {0, 1}, {0, 1, 2}}, alpha);
  inst.rho = rho;
  return inst;
}

// d=5 instance whose weak local minimum {0} is far from the strong local
// minima, all of which contain {1, 2}. Global minimum -alpha at {1, 2}.
inline DSInstance tiny_c(double alpha = 1.0, double rho = 0.0) {
  DSInstance inst;
  inst.G = make_set_cover(3, {{0}, {1}, {1}, {2}, {2}}, alpha);
  inst.H = make_set_cover(3, {{0}, {1}, {2}, {0}, {0}}, alpha);
  inst.rho = rho;
  return inst;
}

// Random set-cover pair scaled to keep values O(1). Both components are
// submodular and nondecreasing by construction.
inline DSInstance random_cover_instance(Rng& rng, int d, double rho = 0.0) {
  const int universe = 2 * d;
  auto draw_covers = [&](double keep) {
    std::vector<std::vector<int>> covers(static_cast<std::size_t>(d));
    for (auto& c : covers) {
      for (int u = 0; u < universe; ++u)
        if (rng.next_double() < keep) c.push_back(u);
      if (c.empty()) c.push_back(static_cast<int>(rng.next_below(universe)));
    }
    return covers;
  };
  DSInstance inst;
  const double alpha_g = 0.25 + rng.next_double();
  const double alpha_h = 0.25 + rng.next_double();
  inst.G = make_set_cover(universe, draw_covers(0.25), alpha_g);
  inst.H = make_set_cover(universe, draw_covers(0.25), alpha_h);
  inst.rho = rho;
  return inst;
}

// G is a random cover, H is modular with nonnegative weights.
inline DSInstance random_modular_h_instance(Rng& rng, int d, double rho = 0.0) {
  DSInstance inst = random_cover_instance(rng, d, rho);
  std::vector<double> w(static_cast<std::size_t>(d));
  for (auto& wi : w) wi = 2.0 * rng.next_double();
  inst.H = make_modular(w);
  return inst;
}

inline std::vector<double> random_point(Rng& rng, int d) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& v : x) v = rng.next_double();
  return x;
}

}  // namespace dsmin::testing

#endif  // DSMIN_TESTS_FIXTURES_HPP
