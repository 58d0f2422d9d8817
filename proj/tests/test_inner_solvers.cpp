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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dsmin/inner_solvers.hpp"
#include "dsmin/oracle.hpp"
#include "fixtures.hpp"

using namespace dsmin;
using dsmin::testing::tiny_a;

namespace {

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double box_objective(const PgmProblem& p, const std::vector<double>& x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return lovasz_eval(p.G, x) - inner(p.linear, x) + 0.5 * p.rho * sq;
}

// Independent reference for the box subproblem: enumerate all d! order
// cones; on each, the objective is a quadratic projected onto a bounded
// monotone chain, solved exactly by pool-adjacent-violators plus clipping.
// The candidate objectives are evaluated with the true (piecewise-linear)
// extension, so the smallest candidate value is the exact minimum.
std::vector<double> cone_pav_reference(const PgmProblem& p) {
  const int d = p.G.ground.d;
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();
  do {
    const BasePoint vertex = greedy_subgradient(p.G, Permutation{order});
    // Targets for the chain x_{order[0]} >= ... >= x_{order[d-1]}.
    std::vector<double> target(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const std::size_t e = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
      target[static_cast<std::size_t>(k)] = (p.linear[e] - vertex.y[e]) / p.rho;
    }
    // Nonincreasing isotonic fit via PAV on the reversed sequence.
    std::vector<double> rev(target.rbegin(), target.rend());
    std::vector<double> val;
    std::vector<int> cnt;
    for (double t : rev) {
      val.push_back(t);
      cnt.push_back(1);
      while (val.size() > 1 && val[val.size() - 2] > val.back()) {
        const double merged = (val[val.size() - 2] * cnt[cnt.size() - 2] +
                               val.back() * cnt.back()) /
                              (cnt[cnt.size() - 2] + cnt.back());
        cnt[cnt.size() - 2] += cnt.back();
        val[val.size() - 2] = merged;
        val.pop_back();
        cnt.pop_back();
      }
    }
    std::vector<double> fit;
    for (std::size_t b = 0; b < val.size(); ++b)
      fit.insert(fit.end(), static_cast<std::size_t>(cnt[b]), val[b]);
    std::reverse(fit.begin(), fit.end());

    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      x[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
          std::clamp(fit[static_cast<std::size_t>(k)], 0.0, 1.0);
    const double obj = box_objective(p, x);
    if (obj < best) {
      best = obj;
      best_x = x;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best_x;
}

}  // namespace

TEST_CASE("pgm step sizes") {
  CHECK(pgm_step_size(StepRule::rho_pos, 0, 0.0, 1.0, 3) == doctest::Approx(1.0));
  CHECK(pgm_step_size(StepRule::rho_zero, 3, 2.0, 0.0, 4) == doctest::Approx(0.5));
  CHECK(pgm_step_size(StepRule::rho_pos, 8, 0.0, 0.5, 3) == doctest::Approx(0.4));
}

TEST_CASE("pgm closed form for modular components") {
  PgmProblem p;
  p.G = make_modular({1.0, -0.5, 2.0});
  p.linear = {0.5, 0.25, 3.0};
  p.rho = 2.0;
  p.x0 = {0.0, 0.0, 0.0};
  const PgmResult res = pgm_solve(p, 1e-9, 100, StepRule::rho_pos);
  CHECK(res.certified);
  CHECK(res.gap_certificate == 0.0);
  for (int i = 0; i < 3; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    CHECK(res.x[u] ==
          doctest::Approx(std::clamp((p.linear[u] - (*p.G.modular_weights)[u]) / p.rho,
                                     0.0, 1.0)));
  }
}

TEST_CASE("pgm at zero linear term with nondecreasing G") {
  PgmProblem p;
  p.G = make_set_cover(4, {{0}, {1}, {2}, {3}}, 1.0);
  p.linear = {0.0, 0.0, 0.0, 0.0};
  p.rho = 0.0;
  p.x0 = {0.0, 0.0, 0.0, 0.0};
  const PgmResult res = pgm_solve(p, 1e-9, 200, StepRule::rho_zero);
  CHECK(res.certified);
  CHECK(res.objective == doctest::Approx(0.0));
  for (double v : res.x) CHECK(v == 0.0);
}

TEST_CASE("pgm box minimum of a modular objective is attained at a vertex") {
  PgmProblem p;
  p.G = make_modular({1.0, 1.0, 1.0});
  p.linear = {1.0, 1.0, 3.0};
  p.rho = 0.0;
  p.x0 = {0.5, 0.5, 0.5};
  const PgmResult res = pgm_solve(p, 1e-9, 200, StepRule::rho_zero);
  CHECK(res.objective == doctest::Approx(-2.0));
  const SetFunction shifted = make_modular({0.0, 0.0, -2.0});
  CHECK(round_f(shifted, res.x).set == Subset::of({2}, 3));
}

TEST_CASE("pgm certificate soundness against exhaustive vertices") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const DSInstance inst = dsmin::testing::random_cover_instance(rng, 6);
    PgmProblem p;
    p.G = inst.G;
    p.linear = greedy_subgradient(inst.H, sort_decreasing(
                                              dsmin::testing::random_point(rng, 6)))
                   .y;
    p.rho = 0.0;
    p.x0 = dsmin::testing::random_point(rng, 6);
    const PgmResult pgm = pgm_solve(p, 1e-6, 400, StepRule::rho_zero);
    const PgmResult exact = exact_box_prox(p);
    CHECK(pgm.objective - exact.objective <= pgm.gap_certificate + 1e-6);
    CHECK(pgm.gap_certificate >= 0.0);
  }
}

TEST_CASE("exact box prox matches the cone enumeration reference") {
  Rng rng(37);
  for (int trial = 0; trial < 24; ++trial) {
    const int d = 4 + static_cast<int>(rng.next_below(3));
    const DSInstance inst = dsmin::testing::random_cover_instance(rng, d);
    PgmProblem p;
    p.G = inst.G;
    p.linear.resize(static_cast<std::size_t>(d));
    for (auto& v : p.linear) v = 3.0 * rng.next_double() - 1.0;
    p.rho = 0.05 + 2.0 * rng.next_double();
    p.x0.assign(static_cast<std::size_t>(d), 0.0);

    const PgmResult got = exact_box_prox(p);
    const std::vector<double> want = cone_pav_reference(p);
    CHECK(box_objective(p, got.x) == doctest::Approx(box_objective(p, want)).epsilon(1e-9));
    // rho > 0 makes the solution unique.
    for (int i = 0; i < d; ++i)
      CHECK(got.x[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-7));
  }
}

TEST_CASE("exact box prox agrees with long pgm runs") {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const DSInstance inst = dsmin::testing::random_cover_instance(rng, 5);
    PgmProblem p;
    p.G = inst.G;
    p.linear.resize(5);
    for (auto& v : p.linear) v = 2.0 * rng.next_double();
    p.rho = 1.0;
    p.x0 = dsmin::testing::random_point(rng, 5);
    const PgmResult exact = exact_box_prox(p);
    const PgmResult pgm = pgm_solve(p, 1e-10, 20000, StepRule::rho_pos);
    CHECK(exact.objective <= pgm.objective + 1e-8);
  }
}

TEST_CASE("linmin over the subdifferential") {
  // Strictly sorted x: the output ignores s.
  const SetFunction h = make_set_cover(3, {{0}, {0, 1}, {0, 1, 2}}, 1.0);
  const std::vector<double> x = {0.9, 0.5, 0.1};
  const BasePoint a = linmin_subdiff({1.0, -2.0, 0.0}, x, h, 0.0);
  const BasePoint b = linmin_subdiff({-3.0, 5.0, 1.0}, x, h, 0.0);
  CHECK(a.y == b.y);

  // Maximizing <s, .> is minimizing <-s, .>.
  SetFunction sq;
  sq.ground = GroundSet(2);
  sq.eval = [](const Subset& v) { return std::sqrt(double(v.size())); };
  const BasePoint m = linmin_subdiff({0.0, -1.0}, {0.5, 0.5}, sq, 0.0);
  CHECK(m.y[0] == doctest::Approx(std::sqrt(2.0) - 1.0));
  CHECK(m.y[1] == doctest::Approx(1.0));

  const BasePoint z = linmin_subdiff({0.3, 0.7}, {1.0, 0.0}, make_modular({0.0, 0.0}), 1.0);
  CHECK(z.y == std::vector<double>{1.0, 0.0});
}

TEST_CASE("frank-wolfe on a singleton subdifferential") {
  DSInstance inst;
  inst.G = make_modular({1.0, 1.0, 1.0});
  inst.H = make_modular({0.5, 2.0, 0.25});
  inst.rho = 0.0;
  PhiObjective phi{{0.5, 0.5, 0.5}, &inst};
  const BasePoint w0 = linmin_subdiff({0, 0, 0}, phi.x_anchor, inst.H, 0.0);
  const FwResult res = fw_concave_min(phi, w0, 1e-9, 10, 1e-9, InnerOptions{});
  CHECK(res.iterations == 1);
  CHECK(res.gap_at_best == doctest::Approx(0.0));
  CHECK(res.w_best.y == w0.y);
}

TEST_CASE("frank-wolfe at the stalled point of the tiny instance") {
  DSInstance inst = tiny_a();
  PhiObjective phi{{1.0, 0.5, 0.0}, &inst};
  const BasePoint w0 = greedy_subgradient(inst.H, sort_decreasing(phi.x_anchor));
  CHECK(w0.y == std::vector<double>{1.0, 1.0, 1.0});
  const FwResult res = fw_concave_min(phi, w0, 1e-9, 10, 1e-9, InnerOptions{});
  CHECK(res.gap_at_best == doctest::Approx(0.0));
  CHECK(res.w_best.y == w0.y);
}

TEST_CASE("frank-wolfe over the sqrt-cardinality face") {
  DSInstance inst;
  inst.G = make_modular({0.0, 0.0});
  SetFunction sq;
  sq.ground = GroundSet(2);
  sq.eval = [](const Subset& v) { return std::sqrt(double(v.size())); };
  sq.nondecreasing = true;
  sq.value_bound = std::sqrt(2.0);
  inst.H = sq;
  inst.rho = 0.0;
  PhiObjective phi{{0.5, 0.5}, &inst};

  const FwResult enumd = concave_min_vertex_enum(phi, 1e-9, InnerOptions{});
  for (const BasePoint& w0 : subdiff_vertices(inst.H, phi.x_anchor, 0.0, 100)) {
    const FwResult fw = fw_concave_min(phi, w0, 1e-9, 2, 1e-9, InnerOptions{});
    CHECK(fw.phi_best == doctest::Approx(enumd.phi_best).epsilon(1e-9));
  }
}

TEST_CASE("fw gap bound and monotonicity on random instances") {
  Rng rng(43);
  InnerOptions exact;
  exact.mode = InnerMode::exact;
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 5;
    const DSInstance inst = dsmin::testing::random_cover_instance(rng, d, 0.1);
    const Subset x0 = Subset::from_mask(static_cast<std::uint32_t>(rng.next_below(1u << d)), d);
    PhiObjective phi{indicator(x0), &inst};
    const FwResult best = concave_min_vertex_enum(phi, 1e-10, exact);
    BasePoint w0 = greedy_subgradient(inst.H, sort_decreasing(phi.x_anchor));
    for (int i = 0; i < d; ++i)
      w0.y[static_cast<std::size_t>(i)] += inst.rho * phi.x_anchor[static_cast<std::size_t>(i)];

    for (int T : {1, 2, 5}) {
      const FwResult fw = fw_concave_min(phi, w0, 0.0, T, 1e-10, exact);
      double min_gap = std::numeric_limits<double>::infinity();
      for (double g : fw.gap_history) min_gap = std::min(min_gap, g);
      const PhiValue at_w0 = eval_phi(phi, w0.y, 1e-10, exact);
      CHECK(min_gap <= (at_w0.phi - best.phi_best) / T + 1e-10 + 1e-6);
    }

    const FwResult fw = fw_concave_min(phi, w0, 0.0, 8, 1e-10, exact);
    for (std::size_t t = 1; t < fw.phi_history.size(); ++t)
      CHECK(fw.phi_history[t] <= fw.phi_history[t - 1] + 1e-10 + 1e-9);

    // Every iterate stays in rho*x + B(H): spot-check the accepted one.
    const std::vector<double> table = value_table(inst.H);
    double total = 0.0;
    for (int i = 0; i < d; ++i)
      total += fw.w_best.y[static_cast<std::size_t>(i)] -
               inst.rho * phi.x_anchor[static_cast<std::size_t>(i)];
    CHECK(total == doctest::Approx(table[(1u << d) - 1]));
    for (std::uint32_t m = 0; m < (1u << d); ++m) {
      double sum = 0.0;
      for (int i = 0; i < d; ++i)
        if ((m >> i) & 1u)
          sum += fw.w_best.y[static_cast<std::size_t>(i)] -
                 inst.rho * phi.x_anchor[static_cast<std::size_t>(i)];
      CHECK(sum <= table[m] + 1e-9);
    }
  }
}

TEST_CASE("subdiff vertex enumeration") {
  const SetFunction h = make_set_cover(3, {{0}, {0, 1}, {0, 1, 2}}, 1.0);
  CHECK(subdiff_vertices(h, {1.0, 0.5, 0.0}, 0.0, 10).size() == 1);

  SetFunction sq;
  sq.ground = GroundSet(2);
  sq.eval = [](const Subset& v) { return std::sqrt(double(v.size())); };
  CHECK(subdiff_vertices(sq, {0.5, 0.5}, 0.0, 10).size() == 2);
  CHECK_THROWS_AS(subdiff_vertices(sq, {0.5, 0.5}, 0.0, 1), std::runtime_error);
}

TEST_CASE("pgm reports non-certified results when the budget is too small") {
  Rng rng(109);
  const DSInstance inst = dsmin::testing::random_cover_instance(rng, 8);
  PgmProblem p;
  p.G = inst.G;
  p.linear = greedy_subgradient(inst.H, sort_decreasing(dsmin::testing::random_point(rng, 8))).y;
  p.rho = 0.0;
  p.x0 = dsmin::testing::random_point(rng, 8);
  const PgmResult res = pgm_solve(p, 1e-12, 3, StepRule::rho_zero);
  CHECK_FALSE(res.certified);
  CHECK(res.gap_certificate > 1e-12);
  // The returned point is still within the box.
  for (double v : res.x) CHECK((0.0 <= v && v <= 1.0));
}

TEST_CASE("linmin matches vertex enumeration under ties") {
  Rng rng(127);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 4 + static_cast<int>(rng.next_below(3));
    const DSInstance inst = dsmin::testing::random_cover_instance(rng, d, 0.2);
    // Points with deliberate ties so the subdifferential has many vertices.
    std::vector<double> x(static_cast<std::size_t>(d));
    const double levels[] = {0.0, 0.5, 0.5, 1.0};
    for (auto& v : x) v = levels[rng.next_below(4)];
    std::vector<double> s(static_cast<std::size_t>(d));
    for (auto& v : s) v = 2.0 * rng.next_double() - 1.0;

    const BasePoint v = linmin_subdiff(s, x, inst.H, inst.rho);
    double got = 0.0;
    for (int i = 0; i < d; ++i) got += s[static_cast<std::size_t>(i)] * v.y[static_cast<std::size_t>(i)];
    double want = std::numeric_limits<double>::infinity();
    for (const BasePoint& w : subdiff_vertices(inst.H, x, inst.rho, 100000)) {
      double ip = 0.0;
      for (int i = 0; i < d; ++i) ip += s[static_cast<std::size_t>(i)] * w.y[static_cast<std::size_t>(i)];
      want = std::min(want, ip);
    }
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}
