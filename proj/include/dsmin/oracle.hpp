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

#ifndef DSMIN_ORACLE_HPP
#define DSMIN_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dsmin/set_function.hpp"

namespace dsmin {

// Exhaustive ground truth for desk-scale verification. Hard caps fail fast;
// there is no sampling fallback.

struct OracleReport {
  double global_min_value = 0.0;
  std::vector<Subset> global_minimizers;
};

struct LocalMinReport {
  bool is_minimum = false;
  std::optional<Subset> witness;  // a strictly-improving neighbor, when found
};

struct SubmodularityReport {
  bool is_submodular = false;
  // Violating triple (A, B, i) with A subset of B, i outside B.
  std::optional<std::pair<std::pair<Subset, Subset>, int>> witness;
};

// All 2^d values of F indexed by bitmask. Requires d <= 20.
std::vector<double> value_table(const SetFunction& f);

// Exact minimum and all minimizers. Requires d <= 20.
OracleReport brute_force_min(const SetFunction& f);

// Checks all 2d single flips: F(X) <= F(X u i) + eps and
// F(X) <= F(X \ i) + eps.
LocalMinReport is_local_min(const SetFunction& f, const Subset& x, double eps);

// Exhaustive check over all subsets and supersets of X.
// Requires 2^|X| + 2^(d-|X|) <= 2^20.
LocalMinReport is_strong_local_min(const SetFunction& f, const Subset& x, double eps);

// Enumerated weak DR constants of a nondecreasing F (d <= 12):
// alpha = min F(i|A)/F(i|B) over A subset of B, i outside B, F(i|B) > 0;
// beta  = min F(i|B)/F(i|A) over the same index set with F(i|A) > 0.
// Vacuous index sets give 1; results are clamped to (0, 1].
std::pair<double, double> weak_dr_constants(const SetFunction& f);

// Checks diminishing marginal gains on all (A subset of B, i) triples with
// 1e-12 slack. Requires d <= 12.
SubmodularityReport check_submodular(const SetFunction& f);

// max over all d! greedy vertices of <x, y>; equals lovasz_eval for
// submodular F. Requires d <= 7.
double lovasz_bruteforce(const SetFunction& f, const std::vector<double>& x);

}  // namespace dsmin

#endif  // DSMIN_ORACLE_HPP
