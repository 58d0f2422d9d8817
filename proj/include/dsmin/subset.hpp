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

#ifndef DSMIN_SUBSET_HPP
#define DSMIN_SUBSET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmin {

// Ground set V = {0, ..., d-1}. Elements are 0-based throughout.
struct GroundSet {
  int d = 0;

  explicit GroundSet(int d_) : d(d_) {
    if (d < 1) throw std::invalid_argument("GroundSet: d must be >= 1");
  }
};

// A subset of a fixed ground set, stored as a bitset.
class Subset {
 public:
  Subset() = default;
  explicit Subset(int ground_size)
      : d_(ground_size), bits_((ground_size + 63) / 64, 0) {
    if (ground_size < 0) throw std::invalid_argument("Subset: negative ground size");
  }

  static Subset from_mask(std::uint64_t mask, int ground_size) {
    if (ground_size > 64) throw std::invalid_argument("Subset::from_mask: d > 64");
    Subset s(ground_size);
    if (ground_size > 0) s.bits_[0] = mask;
    if (ground_size < 64 && (mask >> ground_size) != 0)
      throw std::invalid_argument("Subset::from_mask: mask has bits outside V");
    return s;
  }

  static Subset of(std::initializer_list<int> elems, int ground_size) {
    Subset s(ground_size);
    for (int e : elems) s.add(e);
    return s;
  }

  static Subset full(int ground_size) {
    Subset s(ground_size);
    for (int i = 0; i < ground_size; ++i) s.add(i);
    return s;
  }

  int ground_size() const { return d_; }

  bool contains(int i) const {
    check_index(i);
    return (bits_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }

  void add(int i) {
    check_index(i);
    bits_[static_cast<std::size_t>(i) >> 6] |= (std::uint64_t{1} << (i & 63));
  }

  void remove(int i) {
    check_index(i);
    bits_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  Subset with(int i) const {
    Subset s = *this;
    s.add(i);
    return s;
  }

  Subset without(int i) const {
    Subset s = *this;
    s.remove(i);
    return s;
  }

  int size() const {
    int c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
  }

  bool empty() const {
    for (std::uint64_t w : bits_)
      if (w) return false;
    return true;
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int i = 0; i < d_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::uint64_t mask() const {
    if (d_ > 64) throw std::invalid_argument("Subset::mask: d > 64");
    return bits_.empty() ? 0 : bits_[0];
  }

  Subset union_with(const Subset& o) const {
    Subset s = *this;
    for (std::size_t w = 0; w < bits_.size(); ++w) s.bits_[w] |= o.bits_[w];
    return s;
  }

  Subset intersect(const Subset& o) const {
    Subset s = *this;
    for (std::size_t w = 0; w < bits_.size(); ++w) s.bits_[w] &= o.bits_[w];
    return s;
  }

  Subset complement() const {
    Subset s(d_);
    for (int i = 0; i < d_; ++i)
      if (!contains(i)) s.add(i);
    return s;
  }

  bool is_subset_of(const Subset& o) const {
    for (std::size_t w = 0; w < bits_.size(); ++w)
      if (bits_[w] & ~o.bits_[w]) return false;
    return true;
  }

  bool operator==(const Subset& o) const { return d_ == o.d_ && bits_ == o.bits_; }
  bool operator!=(const Subset& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : elements()) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= d_)
      throw std::invalid_argument("Subset: element index " + std::to_string(i) +
                                  " out of range for d=" + std::to_string(d_));
  }

  int d_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Indicator vector of X as a point of the hypercube.
inline std::vector<double> indicator(const Subset& x) {
  std::vector<double> v(static_cast<std::size_t>(x.ground_size()), 0.0);
  for (int e : x.elements()) v[static_cast<std::size_t>(e)] = 1.0;
  return v;
}

}  // namespace dsmin

#endif  // DSMIN_SUBSET_HPP
