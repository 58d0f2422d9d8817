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

#include "dsmin/dc_solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dsmin/dc_engine.hpp"
#include "dsmin/oracle.hpp"
#include "dsmin/rng.hpp"
#include "json.hpp"

namespace dsmin {

CertBound cert_bound(double rho, int d, double eps, double eps_x, double eps_y) {
  if (rho < 0 || d < 0 || eps < 0 || eps_x < 0 || eps_y < 0)
    throw std::invalid_argument("cert_bound: negative input");
  CertBound b;
  b.rho = rho;
  b.d = d;
  b.eps = eps;
  b.eps_x = eps_x;
  b.eps_y = eps_y;
  const double slack = eps + eps_x;
  b.eps_prime = (slack <= rho * d / 2.0) ? std::sqrt(2.0 * rho * d * slack)
                                         : rho * d / 2.0 + slack;
  b.rho_bar = rho * (2.0 - b.t_x - b.t_y);
  b.eps_bar = eps_x / b.t_x + eps_y / b.t_y;
  return b;
}

namespace {

using nlohmann::json;

const char* to_string(PermutationMode m) {
  switch (m) {
    case PermutationMode::single: return "single";
    case PermutationMode::heuristic3: return "heuristic3";
    case PermutationMode::all_d: return "all_d";
  }
  return "single";
}

PermutationMode parse_mode(const std::string& s) {
  if (s == "single") return PermutationMode::single;
  if (s == "heuristic3") return PermutationMode::heuristic3;
  if (s == "all_d") return PermutationMode::all_d;
  throw std::invalid_argument("unknown permutation_mode: " + s);
}

bool is_integral(const std::vector<double>& x) {
  for (double v : x)
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

Subset support_of(const std::vector<double>& x) {
  Subset s(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == 1.0) s.add(static_cast<int>(i));
  return s;
}

}  // namespace

std::string solver_config_to_json(const SolverConfig& cfg) {
  json j;
  j["rho"] = cfg.rho;
  j["eps_stop"] = cfg.eps_stop;
  j["eps_x"] = cfg.eps_x;
  j["max_outer"] = cfg.max_outer;
  j["fw_budget"] = cfg.fw_budget;
  j["permutation_mode"] = to_string(cfg.permutation_mode);
  j["round_each_iter"] = cfg.round_each_iter;
  j["accelerate"] = cfg.accelerate;
  j["accel_q"] = cfg.accel_q;
  j["localmin_restart"] = cfg.localmin_restart;
  j["seed"] = cfg.seed;
  return j.dump();
}

SolverConfig solver_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  SolverConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "rho") cfg.rho = value.get<double>();
    else if (key == "eps_stop") cfg.eps_stop = value.get<double>();
    else if (key == "eps_x") cfg.eps_x = value.get<double>();
    else if (key == "max_outer") cfg.max_outer = value.get<int>();
    else if (key == "fw_budget") cfg.fw_budget = value.get<int>();
    else if (key == "permutation_mode") cfg.permutation_mode = parse_mode(value.get<std::string>());
    else if (key == "round_each_iter") cfg.round_each_iter = value.get<bool>();
    else if (key == "accelerate") cfg.accelerate = value.get<bool>();
    else if (key == "accel_q") cfg.accel_q = value.get<int>();
    else if (key == "localmin_restart") cfg.localmin_restart = value.get<bool>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else throw std::invalid_argument("solver config: unknown key '" + key + "'");
  }
  return cfg;
}

std::string trace_to_jsonl(const SolverTrace& trace) {
  std::string out;
  for (const TraceRecord& r : trace.records) {
    json j;
    j["k"] = r.k;
    j["F_disc"] = r.F_disc;
    j["f_cont"] = r.f_cont;
    j["pgm_gap"] = r.pgm_gap;
    j["fw_gaps"] = r.fw_gaps;
    j["fw_gap_accepted"] = r.fw_gap_accepted;
    j["restart_flag"] = r.restart_flag;
    j["inner_certified"] = r.inner_certified;
    out += j.dump();
    out += "\n";
  }
  json fin;
  fin["method"] = trace.method;
  fin["final_set"] = trace.final_set.elements();
  fin["final_set_ground"] = trace.final_set.ground_size();
  fin["final_value"] = trace.final_value;
  fin["converged"] = trace.converged;
  fin["all_inner_certified"] = trace.all_inner_certified;
  fin["restarts"] = trace.restarts;
  fin["certificate"] = {{"rho", trace.certificate.rho},
                        {"d", trace.certificate.d},
                        {"eps", trace.certificate.eps},
                        {"eps_x", trace.certificate.eps_x},
                        {"eps_y", trace.certificate.eps_y},
                        {"t_x", trace.certificate.t_x},
                        {"t_y", trace.certificate.t_y},
                        {"eps_prime", trace.certificate.eps_prime},
                        {"rho_bar", trace.certificate.rho_bar},
                        {"eps_bar", trace.certificate.eps_bar}};
  out += fin.dump();
  out += "\n";
  return out;
}

SolverTrace trace_from_jsonl(const std::string& text) {
  SolverTrace trace;
  std::istringstream in(text);
  std::string line;
  bool saw_final = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("final_set")) {
      trace.method = j.at("method").get<std::string>();
      Subset s(j.at("final_set_ground").get<int>());
      for (int e : j.at("final_set").get<std::vector<int>>()) s.add(e);
      trace.final_set = s;
      trace.final_value = j.at("final_value").get<double>();
      trace.converged = j.at("converged").get<bool>();
      trace.all_inner_certified = j.at("all_inner_certified").get<bool>();
      trace.restarts = j.at("restarts").get<int>();
      const json& c = j.at("certificate");
      trace.certificate.rho = c.at("rho").get<double>();
      trace.certificate.d = c.at("d").get<int>();
      trace.certificate.eps = c.at("eps").get<double>();
      trace.certificate.eps_x = c.at("eps_x").get<double>();
      trace.certificate.eps_y = c.at("eps_y").get<double>();
      trace.certificate.eps_prime = c.at("eps_prime").get<double>();
      trace.certificate.rho_bar = c.at("rho_bar").get<double>();
      trace.certificate.eps_bar = c.at("eps_bar").get<double>();
      saw_final = true;
      continue;
    }
    TraceRecord r;
    r.k = j.at("k").get<int>();
    r.F_disc = j.at("F_disc").get<double>();
    r.f_cont = j.at("f_cont").get<double>();
    r.pgm_gap = j.at("pgm_gap").get<double>();
    r.fw_gaps = j.at("fw_gaps").get<std::vector<double>>();
    r.fw_gap_accepted = j.at("fw_gap_accepted").get<double>();
    r.restart_flag = j.at("restart_flag").get<bool>();
    r.inner_certified = j.at("inner_certified").get<bool>();
    trace.records.push_back(std::move(r));
  }
  if (!saw_final) throw std::runtime_error("trace_from_jsonl: missing final record");
  return trace;
}

std::vector<double> adca_extrapolate(const std::vector<double>& x_k,
                                     const std::vector<double>& x_km1, int k, int q,
                                     const std::deque<double>& history,
                                     const DSInstance& inst) {
  if (k < 1) throw std::invalid_argument("adca_extrapolate: k must be >= 1");
  (void)q;
  // Nesterov sequence t_1 = 1, t_{j+1} = (1 + sqrt(1 + 4 t_j^2)) / 2.
  double t = 1.0;
  for (int j = 1; j < k; ++j) t = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
  const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
  const double factor = (t - 1.0) / t_next;

  std::vector<double> z(x_k.size());
  for (std::size_t i = 0; i < x_k.size(); ++i)
    z[i] = std::clamp(x_k[i] + factor * (x_k[i] - x_km1[i]), 0.0, 1.0);
  if (z == x_k) return x_k;

  double worst = -std::numeric_limits<double>::infinity();
  for (double v : history) worst = std::max(worst, v);
  if (history.empty()) worst = std::numeric_limits<double>::infinity();

  const double rounded = round_f(inst.objective_handle(), z).value;
  return rounded <= worst ? z : x_k;
}

namespace detail {

namespace {

struct StepOutcome {
  std::vector<double> x_tilde;
  BasePoint y;
  double f_cont_tilde = 0.0;   // g_L - h_L at x_tilde
  RoundedSet rounded;          // Round_F of x_tilde
  double pgm_gap = 0.0;
  bool certified = true;
  std::vector<double> fw_gaps;
  double fw_gap_accepted = 0.0;
};

std::vector<Permutation> candidate_permutations(const std::vector<double>& x,
                                                const Subset& current_set,
                                                const DSInstance& inst,
                                                const SetFunction& f,
                                                PermutationMode mode, Rng& rng) {
  const int d = inst.d();
  std::vector<Permutation> out;
  switch (mode) {
    case PermutationMode::single:
      out.push_back(sort_decreasing(x));
      break;
    case PermutationMode::heuristic3: {
      // Random order, decreasing G(i | X \ i), decreasing F(i | X \ i).
      std::vector<double> t_rand(static_cast<std::size_t>(d));
      for (double& v : t_rand) v = rng.next_double();
      std::vector<double> t_g(static_cast<std::size_t>(d)), t_f(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        const Subset base = current_set.without(i);
        t_g[static_cast<std::size_t>(i)] = marginal_gain(inst.G, i, base);
        t_f[static_cast<std::size_t>(i)] = marginal_gain(f, i, base);
      }
      out.push_back(sort_decreasing(x, &t_rand));
      out.push_back(sort_decreasing(x, &t_g));
      out.push_back(sort_decreasing(x, &t_f));
      break;
    }
    case PermutationMode::all_d: {
      if (!is_integral(x))
        throw std::invalid_argument("permutation_mode=all_d needs integral iterates");
      const Subset xs = support_of(x);
      const std::vector<int> in = xs.elements();
      const std::vector<int> outs = xs.complement().elements();
      for (int j : in) {
        Permutation sigma;
        for (int e : in)
          if (e != j) sigma.order.push_back(e);
        sigma.order.push_back(j);
        for (int e : outs) sigma.order.push_back(e);
        out.push_back(std::move(sigma));
      }
      for (int j : outs) {
        Permutation sigma;
        for (int e : in) sigma.order.push_back(e);
        sigma.order.push_back(j);
        for (int e : outs)
          if (e != j) sigma.order.push_back(e);
        out.push_back(std::move(sigma));
      }
      break;
    }
  }
  return out;
}

StepOutcome finish_outcome(const DSInstance& inst, const SetFunction& f,
                           StepOutcome o) {
  o.f_cont_tilde = lovasz_eval(inst.G, o.x_tilde) - lovasz_eval(inst.H, o.x_tilde);
  o.rounded = round_f(f, o.x_tilde);
  return o;
}

BasePoint shifted_greedy(const DSInstance& inst, const std::vector<double>& x,
                         const Permutation& sigma) {
  BasePoint bp = greedy_subgradient(inst.H, sigma);
  for (std::size_t i = 0; i < bp.y.size(); ++i) bp.y[i] += inst.rho * x[i];
  return bp;
}

}  // namespace

RunResult run_dc_engine(const DSInstance& inst, const SolverConfig& cfg,
                        std::vector<double> x0, const EngineSpec& spec) {
  const int d = inst.d();
  if (static_cast<int>(x0.size()) != d)
    throw std::invalid_argument("run_dc_engine: x0 dimension mismatch");
  if (cfg.rho != inst.rho)
    throw std::invalid_argument("run_dc_engine: cfg.rho and instance rho differ");
  for (double& v : x0) {
    if (std::isnan(v)) throw std::invalid_argument("run_dc_engine: NaN in x0");
    v = std::clamp(v, 0.0, 1.0);
  }
  const SetFunction f = inst.objective_handle();
  Rng rng(cfg.seed);

  const double eps_y = spec.complete ? cfg.eps_x : 0.0;
  // A negative stopping threshold means "run the whole budget"; the
  // certificate slack is still a tolerance, never below zero.
  const CertBound cert =
      cert_bound(inst.rho, d, std::max(cfg.eps_stop, 0.0), cfg.eps_x, eps_y);

  SolverTrace trace;
  trace.method = spec.method_name;
  trace.certificate = cert;

  IterateState cur;
  cur.x = x0;
  cur.k = 0;
  cur.f_cont = lovasz_eval(inst.G, x0) - lovasz_eval(inst.H, x0);
  if (spec.rounding != RoundingRule::none && is_integral(x0)) {
    // Rounded variants start at the given set itself.
    cur.X_rounded = support_of(x0);
    cur.F_disc = inst.objective(cur.X_rounded);
  } else {
    const RoundedSet r0 = round_f(f, x0);
    cur.X_rounded = r0.set;
    cur.F_disc = r0.value;
  }
  {
    TraceRecord r0;
    r0.F_disc = cur.F_disc;
    r0.f_cont = cur.f_cont;
    r0.x = cur.x;
    trace.records.push_back(std::move(r0));
  }

  std::deque<double> history = {cur.F_disc};
  std::vector<double> x_prev = cur.x;
  IterateState before_step = cur;
  int budget_used = 0;
  int record_no = 0;

  while (true) {
    if (budget_used >= cfg.max_outer) {
      trace.converged = false;
      break;
    }
    const auto tick = std::chrono::steady_clock::now();
    ++record_no;
    const int k = cur.k;

    std::vector<double> x_work = cur.x;
    if (cfg.accelerate && k >= 1)
      x_work = adca_extrapolate(cur.x, x_prev, k, cfg.accel_q, history, inst);
    // Tie-break marginals are anchored at the current set: the support for
    // integral iterates, the evaluation rounding otherwise.
    const Subset work_set = is_integral(x_work)
                                ? support_of(x_work)
                                : (x_work == cur.x ? cur.X_rounded
                                                   : round_f(f, x_work).set);

    StepOutcome step;
    if (!spec.complete) {
      const std::vector<Permutation> perms = candidate_permutations(
          x_work, work_set, inst, f, cfg.permutation_mode, rng);
      bool have = false;
      double best_key = 0.0;
      for (const Permutation& sigma : perms) {
        StepOutcome cand;
        cand.y = shifted_greedy(inst, x_work, sigma);
        const PgmResult sol =
            solve_g_subproblem(inst, cand.y.y, x_work, cfg.eps_x, cfg.inner);
        cand.x_tilde = sol.x;
        cand.pgm_gap = sol.gap_certificate;
        cand.certified = sol.certified;
        cand = finish_outcome(inst, f, std::move(cand));
        // Cor-style multi-permutation runs compare the continuous objective;
        // the tie-breaking heuristic compares realized F after rounding.
        const double key = cfg.permutation_mode == PermutationMode::all_d
                               ? cand.f_cont_tilde
                               : cand.rounded.value;
        if (!have || key < best_key) {
          have = true;
          best_key = key;
          step = std::move(cand);
        }
      }
    } else {
      PhiObjective phi{x_work, &inst};
      FwResult fw;
      if (cfg.inner.exact_y_update) {
        fw = concave_min_vertex_enum(phi, cfg.eps_x, cfg.inner);
      } else {
        const std::vector<Permutation> perms = candidate_permutations(
            x_work, work_set, inst, f, cfg.permutation_mode, rng);
        BasePoint w0;
        double best_phi = std::numeric_limits<double>::infinity();
        for (const Permutation& sigma : perms) {
          const BasePoint cand = shifted_greedy(inst, x_work, sigma);
          const double value = eval_phi(phi, cand.y, cfg.eps_x, cfg.inner).phi;
          if (value < best_phi) {
            best_phi = value;
            w0 = cand;
          }
        }
        fw = fw_concave_min(phi, w0, cfg.inner.fw_gap_tol, cfg.fw_budget, cfg.eps_x,
                            cfg.inner);
        budget_used += fw.iterations;
      }
      step.y = fw.w_best;
      step.x_tilde = fw.x_at_best;  // an eps_x-solution of the subproblem at y
      step.pgm_gap = fw.inner_gap_at_best;
      step.certified = fw.inner_certified;
      step.fw_gaps = fw.gap_history;
      step.fw_gap_accepted = fw.gap_at_best;
      step = finish_outcome(inst, f, std::move(step));
    }
    trace.all_inner_certified = trace.all_inner_certified && step.certified;

    // Apply the rounding rule to obtain the next iterate.
    IterateState next;
    next.k = k + 1;
    next.y = step.y;
    double f_cont_record = step.f_cont_tilde;
    switch (spec.rounding) {
      case RoundingRule::none:
        next.x = step.x_tilde;
        next.X_rounded = step.rounded.set;
        next.F_disc = step.rounded.value;
        next.f_cont = step.f_cont_tilde;
        break;
      case RoundingRule::ds_objective:
        next.X_rounded = step.rounded.set;
        next.F_disc = step.rounded.value;
        next.x = indicator(next.X_rounded);
        next.f_cont = next.F_disc;
        break;
      case RoundingRule::subproblem: {
        if (is_integral(step.x_tilde)) {
          next.X_rounded = support_of(step.x_tilde);
        } else {
          std::vector<double> neg(step.y.y.size());
          for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -step.y.y[i];
          const SetFunction sub = sum(inst.G, make_modular(neg));
          next.X_rounded = round_f(sub, step.x_tilde).set;
        }
        next.x = indicator(next.X_rounded);
        next.F_disc = inst.objective(next.X_rounded);
        next.f_cont = next.F_disc;
        break;
      }
    }

    const bool fixed_point = next.X_rounded == cur.X_rounded;
    double decrease = 0.0;
    if (spec.stop == StopRule::f_decrease) decrease = cur.f_cont - next.f_cont;
    if (spec.stop == StopRule::F_decrease) decrease = cur.F_disc - next.F_disc;

    TraceRecord rec;
    rec.k = record_no;
    rec.F_disc = next.F_disc;
    rec.f_cont = f_cont_record;
    rec.pgm_gap = step.pgm_gap;
    rec.fw_gaps = step.fw_gaps;
    rec.fw_gap_accepted = step.fw_gap_accepted;
    rec.restart_flag = false;
    rec.inner_certified = step.certified;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - tick)
                      .count();
    rec.x = next.x;
    trace.records.push_back(rec);

    x_prev = cur.x;
    before_step = cur;
    cur = next;
    history.push_back(cur.F_disc);
    while (static_cast<int>(history.size()) > std::max(cfg.accel_q, 1))
      history.pop_front();
    ++budget_used;

    const bool stop_hit = spec.stop == StopRule::set_fixed_point
                              ? fixed_point
                              : decrease <= cfg.eps_stop;
    if (!stop_hit) continue;

    if (!cfg.localmin_restart) {
      // The pre-step iterate carries the convergence certificate; step.y is
      // the subgradient that was computed at it.
      trace.converged = true;
      cur = before_step;
      cur.y = step.y;
      break;
    }
    const RoundedSet candidate = round_f(f, cur.x);
    if (is_local_min(f, candidate.set, cert.eps_prime).is_minimum) {
      trace.converged = true;
      cur.X_rounded = candidate.set;
      cur.F_disc = candidate.value;
      break;
    }
    // Restart from the best single-flip neighbor of the rounded set.
    Subset best_flip = candidate.set;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      const Subset flip =
          candidate.set.contains(i) ? candidate.set.without(i) : candidate.set.with(i);
      const double value = evaluate(f, flip);
      if (value < best_value) {
        best_value = value;
        best_flip = flip;
      }
    }
    ++trace.restarts;
    cur.x = indicator(best_flip);
    cur.X_rounded = best_flip;
    cur.F_disc = best_value;
    cur.f_cont = best_value;
    x_prev = cur.x;
    history.clear();
    history.push_back(cur.F_disc);
    ++record_no;
    TraceRecord restart_rec;
    restart_rec.k = record_no;
    restart_rec.F_disc = cur.F_disc;
    restart_rec.f_cont = cur.f_cont;
    restart_rec.restart_flag = true;
    restart_rec.x = cur.x;
    trace.records.push_back(std::move(restart_rec));
  }

  trace.final_set = cur.X_rounded;
  trace.final_value = cur.F_disc;
  return {cur, trace};
}

}  // namespace detail

RunResult dca_run(const DSInstance& inst, const SolverConfig& cfg,
                  const std::vector<double>& x0) {
  detail::EngineSpec spec;
  spec.complete = false;
  spec.rounding = cfg.round_each_iter ? detail::RoundingRule::ds_objective
                                      : detail::RoundingRule::none;
  spec.stop = cfg.round_each_iter ? detail::StopRule::F_decrease
                                  : detail::StopRule::f_decrease;
  spec.method_name = cfg.accelerate ? (cfg.round_each_iter ? "adcar" : "adca")
                                    : (cfg.round_each_iter ? "dcar" : "dca");
  return detail::run_dc_engine(inst, cfg, x0, spec);
}

RunResult dcar_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0) {
  SolverConfig c = cfg;
  c.round_each_iter = true;
  return dca_run(inst, c, indicator(X0));
}

RunResult cdca_run(const DSInstance& inst, const SolverConfig& cfg,
                   const std::vector<double>& x0) {
  detail::EngineSpec spec;
  spec.complete = true;
  spec.rounding = cfg.round_each_iter ? detail::RoundingRule::ds_objective
                                      : detail::RoundingRule::none;
  spec.stop = cfg.round_each_iter ? detail::StopRule::F_decrease
                                  : detail::StopRule::f_decrease;
  spec.method_name = cfg.round_each_iter ? "cdcar" : "cdca";
  return detail::run_dc_engine(inst, cfg, x0, spec);
}

RunResult cdcar_run(const DSInstance& inst, const SolverConfig& cfg, const Subset& X0) {
  SolverConfig c = cfg;
  c.round_each_iter = true;
  return cdca_run(inst, c, indicator(X0));
}

}  // namespace dsmin
