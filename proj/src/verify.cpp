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

#include "dsmin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "dsmin/baselines.hpp"
#include "dsmin/dc_solvers.hpp"
#include "dsmin/harness.hpp"
#include "dsmin/oracle.hpp"
#include "dsmin/rng.hpp"

namespace dsmin::verify {

namespace {

DSInstance random_cover_instance(Rng& rng, int d, double rho) {
  const int universe = 2 * d;
  auto draw = [&]() {
    std::vector<std::vector<int>> covers(static_cast<std::size_t>(d));
    for (auto& c : covers) {
      for (int u = 0; u < universe; ++u)
        if (rng.next_double() < 0.25) c.push_back(u);
      if (c.empty()) c.push_back(static_cast<int>(rng.next_below(universe)));
    }
    return covers;
  };
  DSInstance inst;
  inst.G = make_set_cover(universe, draw(), 0.25 + rng.next_double());
  inst.H = make_set_cover(universe, draw(), 0.25 + rng.next_double());
  inst.rho = rho;
  return inst;
}

std::vector<double> random_point(Rng& rng, int d) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = rng.next_double();
  return x;
}

class Suite {
 public:
  explicit Suite(std::ostream& log) : log_(log) {}

  void check(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.witness = body();
    } catch (const std::exception& e) {
      r.witness = std::string("exception: ") + e.what();
    }
    r.passed = r.witness.empty();
    log_ << (r.passed ? "[ ok ] " : "[FAIL] ") << name;
    if (!r.passed) log_ << "  <- " << r.witness;
    log_ << "\n";
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::ostream& log_;
  std::vector<CheckResult> results_;
};

std::string describe(const Subset& s) { return s.to_string(); }

}  // namespace

bool base_membership(const SetFunction& h, const std::vector<double>& y, double tol,
                     std::string* witness) {
  const std::vector<double> table = value_table(h);
  const int d = h.ground.d;
  for (std::uint32_t m = 0; m < table.size(); ++m) {
    double sum = 0.0;
    for (int i = 0; i < d; ++i)
      if ((m >> i) & 1u) sum += y[static_cast<std::size_t>(i)];
    const bool is_full = m + 1 == table.size();
    if (sum > table[m] + tol || (is_full && std::abs(sum - table[m]) > tol)) {
      if (witness) {
        std::ostringstream os;
        os << "y(" << describe(Subset::from_mask(m, d)) << ") = " << sum
           << (is_full ? " != " : " > ") << "H = " << table[m];
        *witness = os.str();
      }
      return false;
    }
  }
  return true;
}

std::vector<CheckResult> run_suite(bool full, std::ostream& log) {
  Suite suite(log);
  const int d_small = full ? 12 : 8;
  const int d_mid = full ? 10 : 7;
  Rng rng(20240101);

  suite.check("setfn: constructors are normalized and submodular", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const DSInstance inst = random_cover_instance(rng, std::min(d_small, 10), 0.0);
      if (evaluate(inst.G, Subset(inst.d())) != 0.0) return std::string("G({}) != 0");
      const SubmodularityReport rep = check_submodular(inst.G);
      if (!rep.is_submodular) return std::string("cover not submodular");
    }
    const SetFunction com = make_concave_of_modular(
        {{0, 1, 2}, {3, 4}, {5}}, {0.5, 1.5, 0.25, 2.0, 1.0, 0.75});
    if (!check_submodular(com).is_submodular)
      return std::string("concave-of-modular not submodular");
    std::vector<std::vector<std::uint8_t>> data;
    Rng drng(5);
    for (int r = 0; r < 24; ++r) {
      std::vector<std::uint8_t> row(6);
      for (auto& c : row) c = drng.next_double() < 0.5 ? 0 : 1;
      data.push_back(row);
    }
    if (!check_submodular(make_empirical_entropy(data)).is_submodular)
      return std::string("entropy not submodular");
    return std::string();
  });

  suite.check("setfn: set cover scales linearly in alpha", [&] {
    const std::vector<std::vector<int>> covers = {{0}, {0, 1}, {1, 2}, {3}};
    const SetFunction h1 = make_set_cover(4, covers, 1.0);
    const SetFunction h2 = make_set_cover(4, covers, 2.0);
    for (std::uint32_t m = 0; m < 16; ++m) {
      const Subset x = Subset::from_mask(m, 4);
      if (evaluate(h2, x) != 2.0 * evaluate(h1, x))
        return "alpha scaling broken at " + describe(x);
    }
    return std::string();
  });

  suite.check("lovasz: extension, additivity, support function", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const DSInstance inst = random_cover_instance(rng, 6, 0.0);
      const SetFunction f = inst.objective_handle();
      for (std::uint32_t m = 0; m < (1u << 6); ++m) {
        const Subset x = Subset::from_mask(m, 6);
        if (std::abs(lovasz_eval(f, indicator(x)) - inst.objective(x)) > 1e-12)
          return "extension mismatch at " + describe(x);
      }
      const std::vector<double> x = random_point(rng, 6);
      if (std::abs(lovasz_eval(f, x) -
                   (lovasz_eval(inst.G, x) - lovasz_eval(inst.H, x))) > 1e-12)
        return std::string("additivity violated");
      if (std::abs(lovasz_eval(inst.G, x) - lovasz_bruteforce(inst.G, x)) > 1e-9)
        return std::string("support-function identity violated");
    }
    return std::string();
  });

  suite.check("lovasz: greedy points lie in the base polyhedron", [&] {
    for (int trial = 0; trial < 6; ++trial) {
      const DSInstance inst = random_cover_instance(rng, d_mid, 0.0);
      const BasePoint bp =
          greedy_subgradient(inst.H, sort_decreasing(random_point(rng, d_mid)));
      std::string witness;
      if (!base_membership(inst.H, bp.y, 1e-9, &witness)) return witness;
    }
    return std::string();
  });

  suite.check("lovasz: rounding never increases the objective", [&] {
    for (int trial = 0; trial < 200; ++trial) {
      const DSInstance inst = random_cover_instance(rng, d_mid, 0.0);
      const SetFunction f = inst.objective_handle();
      const std::vector<double> x = random_point(rng, d_mid);
      if (round_f(f, x).value > lovasz_eval(f, x) + 1e-9)
        return std::string("rounding increased the objective");
    }
    return std::string();
  });

  suite.check("lovasz: Lipschitz bound on 1000 random pairs", [&] {
    const DSInstance inst = random_cover_instance(rng, d_mid, 0.0);
    const double kappa = lipschitz_bound(inst.G);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::vector<double> x = random_point(rng, d_mid);
      const std::vector<double> z = random_point(rng, d_mid);
      double dist = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dist += (x[i] - z[i]) * (x[i] - z[i]);
      if (std::abs(lovasz_eval(inst.G, x) - lovasz_eval(inst.G, z)) >
          kappa * std::sqrt(dist) + 1e-12)
        return std::string("Lipschitz bound violated");
    }
    return std::string();
  });

  suite.check("inner: pgm certificate soundness", [&] {
    for (int trial = 0; trial < 6; ++trial) {
      const DSInstance inst = random_cover_instance(rng, d_mid, 0.0);
      PgmProblem p;
      p.G = inst.G;
      p.linear = greedy_subgradient(inst.H, sort_decreasing(random_point(rng, d_mid))).y;
      p.rho = 0.0;
      p.x0 = random_point(rng, d_mid);
      const PgmResult pgm = pgm_solve(p, 1e-6, 400, StepRule::rho_zero);
      const PgmResult exact = exact_box_prox(p);
      if (pgm.objective - exact.objective > pgm.gap_certificate + 1e-6) {
        std::ostringstream os;
        os << "pgm objective " << pgm.objective << " vs exact " << exact.objective
           << " with certificate " << pgm.gap_certificate;
        return os.str();
      }
    }
    return std::string();
  });

  suite.check("inner: fw gap bound, monotonicity, membership", [&] {
    InnerOptions exact;
    exact.mode = InnerMode::exact;
    for (int trial = 0; trial < 4; ++trial) {
      const int d = 5;
      const DSInstance inst = random_cover_instance(rng, d, 0.1);
      PhiObjective phi{
          indicator(Subset::from_mask(static_cast<std::uint32_t>(rng.next_below(1u << d)), d)),
          &inst};
      const FwResult best = concave_min_vertex_enum(phi, 1e-10, exact);
      BasePoint w0 = greedy_subgradient(inst.H, sort_decreasing(phi.x_anchor));
      for (int i = 0; i < d; ++i)
        w0.y[static_cast<std::size_t>(i)] += inst.rho * phi.x_anchor[static_cast<std::size_t>(i)];
      for (const int T : {1, 2, 5, 10}) {
        const FwResult fw = fw_concave_min(phi, w0, 0.0, T, 1e-10, exact);
        double min_gap = std::numeric_limits<double>::infinity();
        for (double g : fw.gap_history) min_gap = std::min(min_gap, g);
        const double phi0 = eval_phi(phi, w0.y, 1e-10, exact).phi;
        if (min_gap > (phi0 - best.phi_best) / T + 1e-10 + 1e-6)
          return std::string("fw gap bound violated");
        for (std::size_t t = 1; t < fw.phi_history.size(); ++t)
          if (fw.phi_history[t] > fw.phi_history[t - 1] + 1e-10 + 1e-9)
            return std::string("fw not monotone");
        std::vector<double> shifted(fw.w_best.y);
        for (int i = 0; i < d; ++i)
          shifted[static_cast<std::size_t>(i)] -= inst.rho * phi.x_anchor[static_cast<std::size_t>(i)];
        std::string witness;
        if (!base_membership(inst.H, shifted, 1e-9, &witness)) return witness;
      }
    }
    return std::string();
  });

  suite.check("dc: descent inequality and rate bound", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const double rho = 0.25 + rng.next_double();
      const DSInstance inst = random_cover_instance(rng, 6, rho);
      SolverConfig cfg;
      cfg.rho = rho;
      cfg.eps_x = 1e-8;
      cfg.inner.mode = InnerMode::exact;
      cfg.max_outer = 40;
      const auto [state, trace] = dca_run(inst, cfg, random_point(rng, 6));
      for (std::size_t t = 1; t < trace.records.size(); ++t) {
        double dist = 0.0;
        for (std::size_t i = 0; i < trace.records[t].x.size(); ++i) {
          const double delta = trace.records[t].x[i] - trace.records[t - 1].x[i];
          dist += delta * delta;
        }
        const double lhs = trace.records[t - 1].f_cont - trace.records[t].f_cont;
        if (lhs < trace.certificate.rho_bar / 2.0 * dist - trace.certificate.eps_bar - 1e-6)
          return std::string("descent inequality violated");
      }
      const OracleReport rep = brute_force_min(inst.objective_handle());
      double min_dec = std::numeric_limits<double>::infinity();
      for (std::size_t t = 1; t < trace.records.size(); ++t)
        min_dec = std::min(min_dec, trace.records[t - 1].f_cont - trace.records[t].f_cont);
      const double bound = (trace.records[0].f_cont - rep.global_min_value) /
                           static_cast<double>(trace.records.size() - 1);
      if (min_dec > bound + 1e-9) return std::string("rate bound violated");
    }
    return std::string();
  });

  suite.check("dc: rounded variants decrease F up to eps_x", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const DSInstance inst = random_cover_instance(rng, d_mid, 0.1);
      SolverConfig cfg;
      cfg.rho = 0.1;
      cfg.eps_x = 1e-8;
      cfg.inner.mode = InnerMode::exact;
      const auto [state, trace] = dcar_run(inst, cfg, Subset(d_mid));
      for (std::size_t t = 1; t < trace.records.size(); ++t)
        if (trace.records[t].F_disc > trace.records[t - 1].F_disc + cfg.eps_x + 1e-9)
          return std::string("rounded iteration increased F");
    }
    return std::string();
  });

  suite.check("dc: cert_bound is monotone", [&] {
    for (int trial = 0; trial < 200; ++trial) {
      const double r = 2.0 * rng.next_double();
      const int dd = 1 + static_cast<int>(rng.next_below(12));
      const double e = rng.next_double(), ex = rng.next_double();
      const double base = cert_bound(r, dd, e, ex).eps_prime;
      if (cert_bound(r + 0.1, dd, e, ex).eps_prime < base - 1e-12 ||
          cert_bound(r, dd + 1, e, ex).eps_prime < base - 1e-12 ||
          cert_bound(r, dd, e + 0.1, ex).eps_prime < base - 1e-12 ||
          cert_bound(r, dd, e, ex + 0.1).eps_prime < base - 1e-12)
        return std::string("cert_bound not monotone");
    }
    return std::string();
  });

  suite.check("baselines: modular bounds dominate and are tight", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const DSInstance inst = random_cover_instance(rng, std::min(d_small, 10), 0.0);
      const int d = inst.d();
      const Subset anchor =
          Subset::from_mask(static_cast<std::uint32_t>(rng.next_below(1u << d)), d);
      const ModularBound lower = modular_lower(inst.H, anchor);
      if (std::abs(lower.value(anchor) - evaluate(inst.H, anchor)) > 1e-12)
        return std::string("lower bound not tight");
      for (const BoundKind kind : {BoundKind::upper1, BoundKind::upper2}) {
        const ModularBound upper = modular_upper(inst.G, anchor, kind);
        if (std::abs(upper.value(anchor) - evaluate(inst.G, anchor)) > 1e-12)
          return std::string("upper bound not tight");
        for (std::uint32_t m = 0; m < (1u << d); ++m) {
          const Subset x = Subset::from_mask(m, d);
          if (upper.value(x) < evaluate(inst.G, x) - 1e-12)
            return "upper bound violated at " + describe(x);
          if (kind == BoundKind::upper1 && lower.value(x) > evaluate(inst.H, x) + 1e-12)
            return "lower bound violated at " + describe(x);
        }
      }
    }
    return std::string();
  });

  suite.check("baselines: subsup equals dca on integral exact runs", [&] {
    for (int trial = 0; trial < 4; ++trial) {
      const DSInstance inst = random_cover_instance(rng, 6, 0.0);
      SolverConfig cfg;
      cfg.eps_stop = 1e-12;
      cfg.eps_x = 1e-8;
      cfg.inner.mode = InnerMode::exact;
      cfg.seed = 7 + static_cast<std::uint64_t>(trial);
      const Subset X0 = Subset::from_mask(static_cast<std::uint32_t>(rng.next_below(64)), 6);
      const auto [ds, dt] = dca_run(inst, cfg, indicator(X0));
      const auto [ss, st] = subsup_run(inst, cfg, X0);
      const std::size_t common = std::min(dt.records.size(), st.records.size());
      for (std::size_t t = 0; t < common; ++t)
        if (dt.records[t].x != st.records[t].x)
          return "iterate sequences diverge at step " + std::to_string(t);
    }
    return std::string();
  });

  suite.check("oracle: beta-weak DR supermodularity inequality", [&] {
    const SetFunction h = make_concave_of_modular(
        {{0, 1, 2}, {3, 4, 5}}, {0.5, 1.0, 2.0, 0.25, 1.5, 3.0});
    const auto [alpha, beta] = weak_dr_constants(h);
    const std::vector<double> table = value_table(h);
    for (std::uint32_t a = 0; a < 64; ++a)
      for (std::uint32_t b = 0; b < 64; ++b)
        if (table[a] + table[b] / beta > table[a & b] + table[a | b] / beta + 1e-9)
          return std::string("weak DR inequality violated");
    return std::string();
  });

  suite.check("oracle: supermodular local minima are d-strong", [&] {
    const DSInstance inst = random_cover_instance(rng, 6, 0.0);
    const SetFunction super = negate(inst.G);
    for (const double eps : {0.0, 0.1})
      for (std::uint32_t m = 0; m < 64; ++m) {
        const Subset x = Subset::from_mask(m, 6);
        if (is_local_min(super, x, eps).is_minimum &&
            !is_strong_local_min(super, x, eps * 6).is_minimum)
          return "counterexample at " + describe(x);
      }
    return std::string();
  });

  suite.check("oracle: strong local minima of submodular F are global", [&] {
    DSInstance inst = random_cover_instance(rng, 6, 0.0);
    std::vector<double> w(6);
    for (double& v : w) v = 2.0 * rng.next_double();
    inst.H = make_modular(w);
    const SetFunction f = inst.objective_handle();
    const OracleReport rep = brute_force_min(f);
    for (std::uint32_t m = 0; m < 64; ++m) {
      const Subset x = Subset::from_mask(m, 6);
      if (is_strong_local_min(f, x, 0.0).is_minimum &&
          std::abs(evaluate(f, x) - rep.global_min_value) > 1e-12)
        return "non-global strong local minimum " + describe(x);
    }
    return std::string();
  });

  suite.check("harness: speech instances decompose correctly", [&] {
    const SpeechInstance s = gen_speech_synthetic(3, d_small, 3 * d_small, 4, 1.0);
    const DSInstance ds = s.to_ds(0.0);
    if (evaluate(ds.G, Subset(d_small)) != 0.0 || evaluate(ds.H, Subset(d_small)) != 0.0)
      return std::string("speech instance not normalized");
    if (!check_submodular(ds.G).is_submodular) return std::string("speech G not submodular");
    if (!check_submodular(ds.H).is_submodular) return std::string("speech H not submodular");
    const auto [alpha, beta] = weak_dr_constants(ds.H);
    double bound = 1.0;
    for (const auto& group : s.groups) {
      double total = 0.0;
      for (int e : group) total += s.m[static_cast<std::size_t>(e)];
      for (int e : group)
        bound = std::min(bound, 0.5 * std::sqrt(s.m[static_cast<std::size_t>(e)] / total));
    }
    if (beta < bound - 1e-12) return std::string("beta below the closed-form bound");
    return std::string();
  });

  if (full) {
    suite.check("regression: stalled chain example", [&] {
      DSInstance inst;
      inst.G = make_modular({1.0, 1.0, 1.0});
      inst.H = make_set_cover(3, {{0}, {0, 1}, {0, 1, 2}}, 1.0);
      inst.rho = 1.0;
      SolverConfig cfg;
      cfg.rho = 1.0;
      cfg.eps_x = 1e-8;
      cfg.inner.mode = InnerMode::exact;
      const auto [state, trace] = dca_run(inst, cfg, {1.0, 0.5, 0.0});
      if (!trace.converged || std::abs(state.f_cont) > 1e-9)
        return std::string("plain run did not stall at zero");
      cfg.localmin_restart = true;
      const auto [rstate, rtrace] = dca_run(inst, cfg, {1.0, 0.5, 0.0});
      if (rtrace.final_set != Subset::of({2}, 3) || rtrace.final_value != -2.0)
        return std::string("restart did not reach the global minimum");
      return std::string();
    });

    suite.check("regression: weak vs strong local minima example", [&] {
      DSInstance inst;
      inst.G = make_set_cover(3, {{0}, {1}, {1}, {2}, {2}}, 1.0);
      inst.H = make_set_cover(3, {{0}, {1}, {2}, {0}, {0}}, 1.0);
      inst.rho = 0.0;
      const SetFunction f = inst.objective_handle();
      if (!is_local_min(f, Subset::of({0}, 5), 0.0).is_minimum)
        return std::string("{0} should be a local minimum");
      const LocalMinReport strong = is_strong_local_min(f, Subset::of({0}, 5), 0.0);
      if (strong.is_minimum || !strong.witness.has_value())
        return std::string("{0} should fail the strong check with a witness");
      SolverConfig cfg;
      cfg.eps_x = 1e-8;
      cfg.inner.mode = InnerMode::exact;
      const auto [state, trace] = cdcar_run(inst, cfg, Subset::of({0}, 5));
      if (std::abs(trace.final_value + 1.0) > 1e-12)
        return std::string("cdcar did not reach the optimum");
      return std::string();
    });
  }

  return suite.take();
}

}  // namespace dsmin::verify
