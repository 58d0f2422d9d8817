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

#ifndef DSMIN_VERIFY_HPP
#define DSMIN_VERIFY_HPP

#include <ostream>
#include <string>
#include <vector>

#include "dsmin/set_function.hpp"

namespace dsmin::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;  // printed when a check fails
};

// Oracle-backed invariant suites: `full` raises the exhaustive caps and adds
// the worked-example regressions. Returns one result per check.
std::vector<CheckResult> run_suite(bool full, std::ostream& log);

// True when y lies in the base polyhedron B(h) up to tol; otherwise fills
// witness with a violated constraint. Exposed so negative controls can feed
// corrupted points through the same check.
bool base_membership(const SetFunction& h, const std::vector<double>& y, double tol,
                     std::string* witness);

}  // namespace dsmin::verify

#endif  // DSMIN_VERIFY_HPP
