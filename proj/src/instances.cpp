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

#include "dsmin/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dsmin {

namespace {

// Per-element cover as a bitset over the universe.
struct CoverBits {
  int words = 0;
  std::vector<std::uint64_t> bits;  // covers.size() * words
};

}  // namespace

SetFunction make_set_cover(int universe_size,
                           const std::vector<std::vector<int>>& covers,
                           double alpha) {
  if (covers.empty()) throw std::invalid_argument("make_set_cover: empty covers list");
  if (universe_size < 1) throw std::invalid_argument("make_set_cover: empty universe");
  if (alpha <= 0.0) throw std::invalid_argument("make_set_cover: alpha must be > 0");

  auto cb = std::make_shared<CoverBits>();
  cb->words = (universe_size + 63) / 64;
  cb->bits.assign(covers.size() * static_cast<std::size_t>(cb->words), 0);
  for (std::size_t i = 0; i < covers.size(); ++i) {
    for (int u : covers[i]) {
      if (u < 0 || u >= universe_size)
        throw std::invalid_argument("make_set_cover: universe element out of range");
      cb->bits[i * cb->words + (static_cast<std::size_t>(u) >> 6)] |=
          std::uint64_t{1} << (u & 63);
    }
  }

  SetFunction f;
  f.ground = GroundSet(static_cast<int>(covers.size()));
  f.eval = [cb, alpha](const Subset& x) {
    std::vector<std::uint64_t> acc(static_cast<std::size_t>(cb->words), 0);
    for (int e : x.elements()) {
      const std::uint64_t* row = &cb->bits[static_cast<std::size_t>(e) * cb->words];
      for (int w = 0; w < cb->words; ++w) acc[static_cast<std::size_t>(w)] |= row[w];
    }
    int covered = 0;
    for (std::uint64_t w : acc) covered += std::popcount(w);
    return alpha * covered;
  };
  f.nondecreasing = true;
  f.value_bound = alpha * universe_size;
  return f;
}

SetFunction make_concave_of_modular(const std::vector<std::vector<int>>& groups,
                                    const std::vector<double>& weights) {
  const int d = static_cast<int>(weights.size());
  if (d == 0) throw std::invalid_argument("make_concave_of_modular: empty weights");
  for (double w : weights)
    if (w < 0.0)
      throw std::invalid_argument("make_concave_of_modular: negative weight");

  std::vector<int> group_of(static_cast<std::size_t>(d), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int e : groups[g]) {
      if (e < 0 || e >= d || group_of[static_cast<std::size_t>(e)] != -1)
        throw std::invalid_argument("make_concave_of_modular: groups must partition V");
      group_of[static_cast<std::size_t>(e)] = static_cast<int>(g);
    }
  }
  for (int g : group_of)
    if (g == -1)
      throw std::invalid_argument("make_concave_of_modular: groups must partition V");

  auto go = std::make_shared<std::vector<int>>(group_of);
  auto wt = std::make_shared<std::vector<double>>(weights);
  const std::size_t r = groups.size();

  SetFunction f;
  f.ground = GroundSet(d);
  f.eval = [go, wt, r](const Subset& x) {
    std::vector<double> mass(r, 0.0);
    for (int e : x.elements())
      mass[static_cast<std::size_t>((*go)[static_cast<std::size_t>(e)])] +=
          (*wt)[static_cast<std::size_t>(e)];
    double v = 0.0;
    for (double m : mass) v += std::sqrt(m);
    return v;
  };
  f.nondecreasing = true;
  double bound = 0.0;
  {
    std::vector<double> mass(r, 0.0);
    for (int e = 0; e < d; ++e)
      mass[static_cast<std::size_t>(group_of[static_cast<std::size_t>(e)])] +=
          weights[static_cast<std::size_t>(e)];
    for (double m : mass) bound += std::sqrt(m);
  }
  f.value_bound = bound;
  return f;
}

namespace {

// Entropy of the empirical distribution of the selected-column patterns over
// the given rows: log(n) - (1/n) sum_k c_k log(c_k), in nats.
double pattern_entropy(const std::vector<std::vector<std::uint8_t>>& data,
                       const std::vector<int>& row_ids,
                       const std::vector<int>& cols) {
  if (cols.empty() || row_ids.empty()) return 0.0;
  std::unordered_map<std::string, int> counts;
  std::string key(cols.size(), '0');
  for (int r : row_ids) {
    const auto& row = data[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < cols.size(); ++j)
      key[j] = static_cast<char>('0' + row[static_cast<std::size_t>(cols[j])]);
    ++counts[key];
  }
  const double n = static_cast<double>(row_ids.size());
  double acc = 0.0;
  for (const auto& [k, c] : counts) acc += static_cast<double>(c) * std::log(static_cast<double>(c));
  return std::log(n) - acc / n;
}

std::vector<int> resolve_columns(std::size_t data_cols, std::vector<int> columns) {
  if (columns.empty()) {
    columns.resize(data_cols);
    std::iota(columns.begin(), columns.end(), 0);
  }
  for (int c : columns)
    if (c < 0 || c >= static_cast<int>(data_cols))
      throw std::invalid_argument("entropy: column selector out of range");
  return columns;
}

}  // namespace

SetFunction make_empirical_entropy(const std::vector<std::vector<std::uint8_t>>& data,
                                   std::vector<int> columns) {
  if (data.empty() || data[0].empty())
    throw std::invalid_argument("make_empirical_entropy: empty data");
  columns = resolve_columns(data[0].size(), std::move(columns));

  auto dat = std::make_shared<std::vector<std::vector<std::uint8_t>>>(data);
  auto cols = std::make_shared<std::vector<int>>(columns);
  std::vector<int> all_rows(data.size());
  std::iota(all_rows.begin(), all_rows.end(), 0);
  auto rows = std::make_shared<std::vector<int>>(all_rows);

  SetFunction f;
  f.ground = GroundSet(static_cast<int>(columns.size()));
  f.eval = [dat, cols, rows](const Subset& x) {
    std::vector<int> selected;
    for (int e : x.elements()) selected.push_back((*cols)[static_cast<std::size_t>(e)]);
    return pattern_entropy(*dat, *rows, selected);
  };
  f.nondecreasing = true;
  f.value_bound = std::log(static_cast<double>(data.size()) + 1.0);
  return f;
}

SetFunction make_conditional_entropy(const std::vector<std::vector<std::uint8_t>>& data,
                                     const std::vector<int>& labels,
                                     std::vector<int> columns) {
  if (data.empty() || data[0].empty())
    throw std::invalid_argument("make_conditional_entropy: empty data");
  if (labels.size() != data.size())
    throw std::invalid_argument("make_conditional_entropy: labels/rows mismatch");
  columns = resolve_columns(data[0].size(), std::move(columns));

  // Partition rows by class once; the handle stays pure.
  std::unordered_map<int, std::vector<int>> by_class;
  for (std::size_t r = 0; r < labels.size(); ++r)
    by_class[labels[r]].push_back(static_cast<int>(r));
  std::vector<std::pair<std::vector<int>, double>> parts;  // rows, p(c)
  for (auto& [c, rws] : by_class)
    parts.emplace_back(rws, static_cast<double>(rws.size()) / static_cast<double>(data.size()));
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first[0] < b.first[0]; });

  auto dat = std::make_shared<std::vector<std::vector<std::uint8_t>>>(data);
  auto cols = std::make_shared<std::vector<int>>(columns);
  auto pts = std::make_shared<std::vector<std::pair<std::vector<int>, double>>>(parts);

  SetFunction f;
  f.ground = GroundSet(static_cast<int>(columns.size()));
  f.eval = [dat, cols, pts](const Subset& x) {
    std::vector<int> selected;
    for (int e : x.elements()) selected.push_back((*cols)[static_cast<std::size_t>(e)]);
    double v = 0.0;
    for (const auto& [rows, p] : *pts) v += p * pattern_entropy(*dat, rows, selected);
    return v;
  };
  f.nondecreasing = true;
  f.value_bound = std::log(static_cast<double>(data.size()) + 1.0);
  return f;
}

BinaryCsv load_binary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_binary_csv: cannot open " + path);

  BinaryCsv out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_binary_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.header.push_back(cell);
  }
  if (out.header.empty()) throw std::runtime_error("load_binary_csv: empty header");

  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    std::stringstream ss(line);
    std::string cell;
    int col_no = 0;
    while (std::getline(ss, cell, ',')) {
      ++col_no;
      if (cell == "0")
        row.push_back(0);
      else if (cell == "1")
        row.push_back(1);
      else
        throw std::runtime_error("load_binary_csv: non-binary cell at row " +
                                 std::to_string(row_no) + ", col " + std::to_string(col_no));
    }
    if (row.size() != out.header.size())
      throw std::runtime_error("load_binary_csv: row " + std::to_string(row_no) +
                               " has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(out.header.size()));
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) throw std::runtime_error("load_binary_csv: no data rows");
  return out;
}

}  // namespace dsmin
