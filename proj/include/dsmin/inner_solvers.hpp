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

#ifndef DSMIN_INNER_SOLVERS_HPP
#define DSMIN_INNER_SOLVERS_HPP

#include <vector>

#include "dsmin/lovasz.hpp"
#include "dsmin/set_function.hpp"

namespace dsmin {

// Convex subproblem min_{x in [0,1]^d} g_L(x) - <y, x> + (rho/2)||x||^2.
struct PgmProblem {
  SetFunction G;
  std::vector<double> linear;  // y
  double rho = 0.0;
  std::vector<double> x0;
};

struct PgmResult {
  std::vector<double> x;
  double objective = 0.0;
  double gap_certificate = 0.0;
  int iterations = 0;
  bool certified = false;
};

enum class StepRule { rho_zero, rho_pos };

// rho = 0: sqrt(d) / (kappa * sqrt(k+1)); rho > 0: 2 / (rho * (k+2)).
double pgm_step_size(StepRule kind, int k, double kappa, double rho, int d);

// Projected subgradient descent returning the best-seen iterate. The gap
// certificate is Phi(x_best) - L, where L is the strongest linearization
// lower bound collected along the run: L = max_z Phi(z) + sum_i min(g_i(0 -
// z_i), g_i(1 - z_i)) over visited points z with subgradient g. Budget
// exhaustion before gap <= eps_x returns a result flagged non-certified.
PgmResult pgm_solve(const PgmProblem& p, double eps_x, int max_iter,
                    StepRule step_rule);

// Exact desk-scale minimizer of the same subproblem (d <= 20): vertex
// enumeration when rho = 0, parametric level search when rho > 0.
PgmResult exact_box_prox(const PgmProblem& p);

enum class InnerMode { pgm, exact };

// Knobs for the inner machinery that are not part of the serialized solver
// configuration; budgets follow the experimental protocol defaults.
struct InnerOptions {
  InnerMode mode = InnerMode::pgm;
  int pgm_max_iter = 1000;
  double fw_gap_tol = 1e-6;
  bool exact_y_update = false;   // vertex-enumerated concave minimization
  int vertex_enum_cap = 100000;  // cap on enumerated subdifferential vertices
};

// Solves the subproblem at linear term y according to opts.
PgmResult solve_g_subproblem(const DSInstance& inst, const std::vector<double>& y,
                             const std::vector<double>& x0, double eps_x,
                             const InnerOptions& opts);

// Concave objective of the dual vertex search: phi(w) = <w, x_anchor> - g*(w),
// where g*(w) is evaluated through the convex subproblem above.
struct PhiObjective {
  std::vector<double> x_anchor;
  const DSInstance* instance = nullptr;
};

struct PhiValue {
  double phi = 0.0;
  std::vector<double> x_tilde;  // minimizer of the g-subproblem at w
  double gap_certificate = 0.0;
  bool certified = false;
};

PhiValue eval_phi(const PhiObjective& phi, const std::vector<double>& w,
                  double eps_x_inner, const InnerOptions& opts);

// v = argmin { <s, w> : w in rho*x + dh_L(x) }, computed by the greedy rule
// on a decreasing order of x with ties broken by ascending s.
BasePoint linmin_subdiff(const std::vector<double>& s, const std::vector<double>& x,
                         const SetFunction& h, double rho);

struct FwResult {
  BasePoint w_best;
  double phi_best = 0.0;
  std::vector<double> x_at_best;    // g-subproblem solution at w_best
  double gap_at_best = 0.0;
  double inner_gap_at_best = 0.0;  // subproblem certificate at the accepted w
  std::vector<double> gap_history;  // FW gap per iterate, starting at w0
  std::vector<double> phi_history;
  int iterations = 0;
  bool inner_certified = true;
};

// Frank-Wolfe with unit step on min { phi(w) : w in rho*x + dh_L(x) }.
// Each iteration solves one g-subproblem for the supergradient
// s_t = x_anchor - x_tilde and takes w_{t+1} = argmin <s_t, w>. Returns the
// iterate with the smallest phi value seen.
FwResult fw_concave_min(const PhiObjective& phi, const BasePoint& w0, double eps,
                        int T, double eps_x_inner, const InnerOptions& opts);

// All distinct greedy vertices of rho*x + dh_L(x): one per ordering of each
// tie block of x. Throws when the count exceeds cap.
std::vector<BasePoint> subdiff_vertices(const SetFunction& h,
                                        const std::vector<double>& x, double rho,
                                        int cap);

// Exact concave minimization over the subdifferential by vertex enumeration;
// valid because a concave minimum over a polytope is attained at a vertex.
FwResult concave_min_vertex_enum(const PhiObjective& phi, double eps_x_inner,
                                 const InnerOptions& opts);

}  // namespace dsmin

#endif  // DSMIN_INNER_SOLVERS_HPP
