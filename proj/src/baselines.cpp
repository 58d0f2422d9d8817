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

#include "dsmin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsmin/dc_engine.hpp"
#include "dsmin/oracle.hpp"
#include "dsmin/rng.hpp"

namespace dsmin {

ModularBound modular_upper(const SetFunction& f, const Subset& y, BoundKind kind) {
  if (kind == BoundKind::lower)
    throw std::invalid_argument("modular_upper: expected an upper bound kind");
  const int d = f.ground.d;
  ModularBound b;
  b.kind = kind;
  b.anchor = y;
  b.weights.assign(static_cast<std::size_t>(d), 0.0);
  b.offset = evaluate(f, y);

  const Subset empty(d);
  const Subset full = Subset::full(d);
  for (int j = 0; j < d; ++j) {
    const std::size_t u = static_cast<std::size_t>(j);
    if (y.contains(j)) {
      const double gain = kind == BoundKind::upper1
                              ? evaluate(f, y) - evaluate(f, y.without(j))
                              : evaluate(f, full) - evaluate(f, full.without(j));
      b.weights[u] = gain;
      b.offset -= gain;
    } else {
      b.weights[u] = kind == BoundKind::upper1 ? evaluate(f, empty.with(j))
                                               : marginal_gain(f, j, y);
    }
  }
  return b;
}

ModularBound modular_lower(const SetFunction& f, const Subset& y) {
  Permutation sigma;
  for (int e : y.elements()) sigma.order.push_back(e);
  for (int e : y.complement().elements()) sigma.order.push_back(e);
  ModularBound b;
  b.kind = BoundKind::lower;
  b.anchor = y;
  b.offset = 0.0;
  b.weights = greedy_subgradient(f, sigma).y;
  return b;
}

RunResult subsup_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0) {
  DSInstance flat = inst;
  flat.rho = 0.0;  // SubSup is the unregularized integral special case
  SolverConfig c = cfg;
  c.rho = 0.0;
  detail::EngineSpec spec;
  spec.complete = false;
  spec.rounding = detail::RoundingRule::subproblem;
  spec.stop = detail::StopRule::set_fixed_point;
  spec.method_name = "subsup";
  return detail::run_dc_engine(flat, c, indicator(X0), spec);
}

Subset double_greedy_max(const SetFunction& f, std::uint64_t seed) {
  const int d = f.ground.d;
  Rng rng(seed);
  Subset lower(d);
  Subset upper = Subset::full(d);
  for (int i = 0; i < d; ++i) {
    const double a = std::max(marginal_gain(f, i, lower), 0.0);
    const double b =
        std::max(evaluate(f, upper.without(i)) - evaluate(f, upper), 0.0);
    bool take = true;
    if (a + b > 0.0) take = rng.next_double() < a / (a + b);
    if (take)
      lower.add(i);
    else
      upper.remove(i);
  }
  return lower;
}

namespace {

// Shared outer loop of the surrogate baselines: candidate proposal per
// iteration, keep-if-better by F, fixed-point stopping, optional flip restart.
template <typename Propose>
RunResult surrogate_loop(const DSInstance& inst, const SolverConfig& cfg,
                         const Subset& X0, const char* name, Propose propose) {
  const SetFunction f = inst.objective_handle();
  const int d = inst.d();
  const CertBound cert = cert_bound(0.0, d, cfg.eps_stop, cfg.eps_x);

  SolverTrace trace;
  trace.method = name;
  trace.certificate = cert;

  Subset X = X0;
  double value = inst.objective(X);
  TraceRecord r0;
  r0.F_disc = value;
  r0.f_cont = value;
  r0.x = indicator(X);
  trace.records.push_back(std::move(r0));

  int record_no = 0;
  for (int k = 0; k < cfg.max_outer; ++k) {
    Subset next = X;
    double next_value = value;
    propose(X, k, [&](const Subset& cand) {
      const double cand_value = inst.objective(cand);
      if (cand_value < next_value) {
        next_value = cand_value;
        next = cand;
      }
    });

    ++record_no;
    TraceRecord rec;
    rec.k = record_no;
    rec.F_disc = next_value;
    rec.f_cont = next_value;
    rec.x = indicator(next);
    trace.records.push_back(std::move(rec));

    const bool fixed_point = next == X;
    X = next;
    value = next_value;
    if (!fixed_point) continue;

    if (!cfg.localmin_restart) {
      trace.converged = true;
      break;
    }
    if (is_local_min(f, X, cert.eps_prime).is_minimum) {
      trace.converged = true;
      break;
    }
    Subset best_flip = X;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      const Subset flip = X.contains(i) ? X.without(i) : X.with(i);
      const double v = evaluate(f, flip);
      if (v < best_value) {
        best_value = v;
        best_flip = flip;
      }
    }
    X = best_flip;
    value = best_value;
    ++trace.restarts;
    ++record_no;
    TraceRecord rr;
    rr.k = record_no;
    rr.F_disc = value;
    rr.f_cont = value;
    rr.restart_flag = true;
    rr.x = indicator(X);
    trace.records.push_back(std::move(rr));
  }

  trace.final_set = X;
  trace.final_value = value;
  IterateState state;
  state.x = indicator(X);
  state.X_rounded = X;
  state.F_disc = value;
  state.f_cont = value;
  state.k = record_no;
  return {state, trace};
}

}  // namespace

RunResult supsub_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0) {
  Rng rng(cfg.seed);
  return surrogate_loop(
      inst, cfg, X0, "supsub", [&](const Subset& X, int, auto&& offer) {
        for (const BoundKind kind : {BoundKind::upper1, BoundKind::upper2}) {
          const ModularBound m = modular_upper(inst.G, X, kind);
          // Maximize H - m, a submodular function, by double greedy.
          std::vector<double> neg(m.weights.size());
          for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -m.weights[i];
          const SetFunction surrogate = sum(inst.H, make_modular(neg));
          offer(double_greedy_max(surrogate, rng.next_u64()));
        }
      });
}

RunResult modmod_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0) {
  return surrogate_loop(
      inst, cfg, X0, "modmod", [&](const Subset& X, int, auto&& offer) {
        const ModularBound lower = modular_lower(inst.H, X);
        for (const BoundKind kind : {BoundKind::upper1, BoundKind::upper2}) {
          const ModularBound upper = modular_upper(inst.G, X, kind);
          Subset cand(inst.d());
          for (int i = 0; i < inst.d(); ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            if (upper.weights[u] - lower.weights[u] < 0.0) cand.add(i);
          }
          offer(cand);
        }
      });
}

RunResult pgm_direct_run(const DSInstance& inst, const SolverConfig& cfg,
                         const std::vector<double>& x0) {
  const int d = inst.d();
  const SetFunction f = inst.objective_handle();
  // Budget follows the per-iteration-cost convention of the experimental
  // protocol: much larger than for the DC outer loops.
  const int budget = 30000;
  const int stride = std::max(budget / 100, 1);

  double kappa = 0.0;
  try {
    kappa = lipschitz_bound(inst.G) + lipschitz_bound(inst.H);
  } catch (const std::runtime_error&) {
    kappa = 1.0;
  }

  SolverTrace trace;
  trace.method = "pgm";
  trace.certificate = cert_bound(0.0, d, cfg.eps_stop, cfg.eps_x);

  std::vector<double> x = x0;
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  std::vector<double> best_x = x;
  double best_f = std::numeric_limits<double>::infinity();

  for (int k = 0; k < budget; ++k) {
    const Permutation sigma = sort_decreasing(x);
    const BasePoint yg = greedy_subgradient(inst.G, sigma);
    const BasePoint yh = greedy_subgradient(inst.H, sigma);
    double f_val = 0.0;
    for (int i = 0; i < d; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      f_val += (yg.y[u] - yh.y[u]) * x[u];
    }
    if (f_val < best_f) {
      best_f = f_val;
      best_x = x;
    }
    if (k % stride == 0) {
      TraceRecord rec;
      rec.k = static_cast<int>(trace.records.size());
      rec.f_cont = f_val;
      rec.F_disc = round_f(f, x).value;
      rec.x = x;
      trace.records.push_back(std::move(rec));
    }
    const double step = pgm_step_size(StepRule::rho_zero, k, kappa, 0.0, d);
    for (int i = 0; i < d; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      x[u] = std::clamp(x[u] - step * (yg.y[u] - yh.y[u]), 0.0, 1.0);
    }
  }

  const RoundedSet rounded = round_f(f, best_x);
  trace.converged = true;
  trace.final_set = rounded.set;
  trace.final_value = rounded.value;
  TraceRecord last;
  last.k = static_cast<int>(trace.records.size());
  last.f_cont = best_f;
  last.F_disc = rounded.value;
  last.x = best_x;
  trace.records.push_back(std::move(last));

  IterateState state;
  state.x = best_x;
  state.X_rounded = rounded.set;
  state.F_disc = rounded.value;
  state.f_cont = best_f;
  return {state, trace};
}

}  // namespace dsmin
