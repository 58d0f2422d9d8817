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

#ifndef DSMIN_DC_SOLVERS_HPP
#define DSMIN_DC_SOLVERS_HPP

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "dsmin/inner_solvers.hpp"
#include "dsmin/lovasz.hpp"
#include "dsmin/set_function.hpp"

namespace dsmin {

enum class PermutationMode { single, heuristic3, all_d };

struct SolverConfig {
  double rho = 0.0;
  double eps_stop = 1e-6;
  double eps_x = 1e-6;
  int max_outer = 30;
  int fw_budget = 10;
  PermutationMode permutation_mode = PermutationMode::single;
  bool round_each_iter = false;
  bool accelerate = false;
  int accel_q = 5;
  bool localmin_restart = false;
  std::uint64_t seed = 42;

  // Runtime-only knobs; excluded from the JSON form.
  InnerOptions inner;
};

// JSON round trip with keys exactly matching the configuration fields.
std::string solver_config_to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const std::string& text);

// Set-level optimality slack implied by the DC-level tolerances:
// eps_prime = sqrt(2*rho*d*(eps+eps_x)) when eps+eps_x <= rho*d/2,
// rho*d/2 + eps + eps_x otherwise. Reporting constants are fixed at
// t_x = t_y = 1/2.
struct CertBound {
  double rho = 0.0;
  int d = 0;
  double eps = 0.0;
  double eps_x = 0.0;
  double eps_y = 0.0;
  double t_x = 0.5;
  double t_y = 0.5;
  double eps_prime = 0.0;
  double rho_bar = 0.0;
  double eps_bar = 0.0;
};

CertBound cert_bound(double rho, int d, double eps, double eps_x, double eps_y = 0.0);

struct IterateState {
  std::vector<double> x;
  Subset X_rounded;
  BasePoint y;
  int k = 0;
  double f_cont = 0.0;  // g_L - h_L at x (the quadratics cancel)
  double F_disc = 0.0;  // F(X_rounded)
};

struct TraceRecord {
  int k = 0;
  double F_disc = 0.0;
  double f_cont = 0.0;
  double pgm_gap = 0.0;
  std::vector<double> fw_gaps;
  double fw_gap_accepted = 0.0;
  double wall_ms = 0.0;  // in-memory only; omitted from the serialized form
  bool restart_flag = false;
  bool inner_certified = true;
  std::vector<double> x;  // iterate after this step; in-memory only
};

struct SolverTrace {
  std::string method;
  std::vector<TraceRecord> records;
  Subset final_set;
  double final_value = 0.0;
  CertBound certificate;
  bool converged = false;
  bool all_inner_certified = true;
  int restarts = 0;
};

// One JSON object per outer iteration. wall_ms is deliberately left out so
// reruns of the same configuration are byte-identical.
std::string trace_to_jsonl(const SolverTrace& trace);
SolverTrace trace_from_jsonl(const std::string& text);

using RunResult = std::pair<IterateState, SolverTrace>;

// DC iterations on f = g - h with g = g_L + box + (rho/2)||.||^2 and
// h = h_L + (rho/2)||.||^2: subgradient step on h, convex subproblem on g.
RunResult dca_run(const DSInstance& inst, const SolverConfig& cfg,
                  const std::vector<double>& x0);

// DCA with the iterate replaced by its rounded set at every step.
RunResult dcar_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0);

// Complete variants: the subgradient is chosen by minimizing the dual
// objective phi over the subdifferential via Frank-Wolfe.
RunResult cdca_run(const DSInstance& inst, const SolverConfig& cfg,
                   const std::vector<double>& x0);
RunResult cdcar_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0);

// Nesterov extrapolation candidate, accepted only when its rounded value does
// not exceed the worst of the last q discrete values.
std::vector<double> adca_extrapolate(const std::vector<double>& x_k,
                                     const std::vector<double>& x_km1, int k, int q,
                                     const std::deque<double>& history,
                                     const DSInstance& inst);

// Runs the given solver with the local-minimality stopping criterion: on
// convergence the rounded set must pass a single-flip check at eps_prime, and
// failing that the iteration restarts from the best flip neighbor.
template <typename Solver, typename Start>
RunResult localmin_restart_wrap(Solver solver, const DSInstance& inst,
                                SolverConfig cfg, const Start& start) {
  cfg.localmin_restart = true;
  return solver(inst, cfg, start);
}

}  // namespace dsmin

#endif  // DSMIN_DC_SOLVERS_HPP
