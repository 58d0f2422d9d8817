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

#ifndef DSMIN_INSTANCES_HPP
#define DSMIN_INSTANCES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dsmin/set_function.hpp"

namespace dsmin {

// Coverage function F(X) = alpha * |union_{i in X} U_i|. One cover set per
// ground element, over a universe {0, ..., universe_size-1}.
SetFunction make_set_cover(int universe_size,
                           const std::vector<std::vector<int>>& covers,
                           double alpha);

// F(X) = sum_i sqrt(m(X n V_i)) for a partition V_1, ..., V_r of V and
// nonnegative weights m.
SetFunction make_concave_of_modular(const std::vector<std::vector<int>>& groups,
                                    const std::vector<double>& weights);

// Plug-in Shannon entropy (natural log) of the empirical joint distribution
// of the selected columns. `columns` maps ground element -> data column;
// empty means the identity mapping over all columns.
SetFunction make_empirical_entropy(const std::vector<std::vector<std::uint8_t>>& data,
                                   std::vector<int> columns = {});

// Conditional entropy sum_c p(c) * entropy of the selected columns among
// rows with label c. Used for the feature-selection decomposition.
SetFunction make_conditional_entropy(const std::vector<std::vector<std::uint8_t>>& data,
                                     const std::vector<int>& labels,
                                     std::vector<int> columns = {});

struct BinaryCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::uint8_t>> rows;  // cells in {0,1}
};

// Parses a CSV with a header row and {0,1} cells. Throws on malformed input
// with the offending row/column in the message.
BinaryCsv load_binary_csv(const std::string& path);

}  // namespace dsmin

#endif  // DSMIN_INSTANCES_HPP
