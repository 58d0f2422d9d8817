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

#ifndef DSMIN_DC_ENGINE_HPP
#define DSMIN_DC_ENGINE_HPP

#include "dsmin/dc_solvers.hpp"

namespace dsmin::detail {

// How the new iterate is extracted from the subproblem solution.
enum class RoundingRule {
  none,          // keep the fractional point
  ds_objective,  // Round_F with respect to G - H
  subproblem,    // the minimizing set of G - y (integral SubSup update)
};

enum class StopRule { f_decrease, F_decrease, set_fixed_point };

struct EngineSpec {
  bool complete = false;
  RoundingRule rounding = RoundingRule::none;
  StopRule stop = StopRule::f_decrease;
  const char* method_name = "dca";
};

// Shared outer loop of the DC family; the public solver entry points and the
// iterative baselines are thin wrappers over this.
RunResult run_dc_engine(const DSInstance& inst, const SolverConfig& cfg,
                        std::vector<double> x0, const EngineSpec& spec);

}  // namespace dsmin::detail

#endif  // DSMIN_DC_ENGINE_HPP
