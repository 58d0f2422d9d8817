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

#ifndef DSMIN_BASELINES_HPP
#define DSMIN_BASELINES_HPP

#include <cstdint>

#include "dsmin/dc_solvers.hpp"

namespace dsmin {

enum class BoundKind { upper1, upper2, lower };

// Modular bound m(X) = offset + sum_{i in X} weights_i, tight at the anchor.
struct ModularBound {
  std::vector<double> weights;
  double offset = 0.0;
  Subset anchor;
  BoundKind kind = BoundKind::upper1;

  double value(const Subset& x) const {
    double v = offset;
    for (int e : x.elements()) v += weights[static_cast<std::size_t>(e)];
    return v;
  }
};

// Modular upper bounds on a submodular F, tight at Y:
//   upper1: F(Y) - sum_{j in Y\X} F(j | Y\j) + sum_{j in X\Y} F(j | {})
//   upper2: F(Y) - sum_{j in Y\X} F(j | V\j) + sum_{j in X\Y} F(j | Y)
ModularBound modular_upper(const SetFunction& f, const Subset& y, BoundKind kind);

// Greedy modular lower bound tight at Y (a base point whose |Y|-prefix is Y).
ModularBound modular_lower(const SetFunction& f, const Subset& y);

// The integral rho=0 special case of the DC iteration: greedy subgradient at
// the current set, then a submodular minimization of G - y.
RunResult subsup_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0);

// Alternates modular upper bounds on G with randomized double-greedy
// maximization of H - m; keeps the better of the two bound kinds.
RunResult supsub_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0);

// Closed-form minimization of modular_upper(G) - modular_lower(H) per kind.
RunResult modmod_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0);

// Projected subgradient descent directly on f_L = g_L - h_L over the box;
// returns the rounding of the best iterate.
RunResult pgm_direct_run(const DSInstance& inst, const SolverConfig& cfg,
                         const std::vector<double>& x0);

// Randomized double greedy for unconstrained submodular maximization over
// elements in index order. The 1/2 guarantee holds in expectation for
// nonnegative F; the procedure itself runs on any normalized F.
Subset double_greedy_max(const SetFunction& f, std::uint64_t seed);

}  // namespace dsmin

#endif  // DSMIN_BASELINES_HPP
