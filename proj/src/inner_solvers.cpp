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

#include "dsmin/inner_solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace dsmin {

namespace {

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(inner(a, a)); }

double sq_norm(const std::vector<double>& a) { return inner(a, a); }

std::vector<double> clip_box(std::vector<double> x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

// Linearization lower bound on the box minimum at point x with subgradient g:
// Phi(x) + sum_i min(g_i * (0 - x_i), g_i * (1 - x_i)).
double linearization_bound(const std::vector<double>& x,
                           const std::vector<double>& grad, double phi_x) {
  double acc = phi_x;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += std::min(grad[i] * (0.0 - x[i]), grad[i] * (1.0 - x[i]));
  return acc;
}

PgmResult modular_closed_form(const PgmProblem& p) {
  const std::vector<double>& c = *p.G.modular_weights;
  const int d = p.G.ground.d;
  PgmResult res;
  res.x.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    if (p.rho > 0.0)
      res.x[u] = std::clamp((p.linear[u] - c[u]) / p.rho, 0.0, 1.0);
    else
      res.x[u] = (c[u] - p.linear[u] < 0.0) ? 1.0 : 0.0;
  }
  res.objective = inner(c, res.x) - inner(p.linear, res.x) + 0.5 * p.rho * sq_norm(res.x);
  res.gap_certificate = 0.0;
  res.iterations = 0;
  res.certified = true;
  return res;
}

}  // namespace

double pgm_step_size(StepRule kind, int k, double kappa, double rho, int d) {
  if (kind == StepRule::rho_pos) return 2.0 / (rho * (k + 2));
  const double denom = std::max(kappa, 1e-12) * std::sqrt(double(k + 1));
  return std::sqrt(double(d)) / denom;
}

PgmResult pgm_solve(const PgmProblem& p, double eps_x, int max_iter,
                    StepRule step_rule) {
  const int d = p.G.ground.d;
  if (static_cast<int>(p.linear.size()) != d)
    throw std::invalid_argument("pgm_solve: linear term dimension mismatch");
  if (p.G.modular_weights) return modular_closed_form(p);

  double kappa = norm2(p.linear);
  try {
    kappa += lipschitz_bound(p.G);
  } catch (const std::runtime_error&) {
    kappa += norm2(greedy_subgradient(p.G, sort_decreasing(clip_box(p.x0))).y);
  }

  std::vector<double> x = clip_box(p.x0);
  PgmResult res;
  res.x = x;
  res.objective = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();

  int k = 0;
  for (; k < max_iter; ++k) {
    const BasePoint sub = greedy_subgradient(p.G, sort_decreasing(x));
    // <sub.y, x> equals g_L(x) because the order is consistent with x.
    const double phi = inner(sub.y, x) - inner(p.linear, x) + 0.5 * p.rho * sq_norm(x);
    std::vector<double> grad(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      grad[u] = sub.y[u] - p.linear[u] + p.rho * x[u];
    }
    if (phi < res.objective) {
      res.objective = phi;
      res.x = x;
    }
    lower = std::max(lower, linearization_bound(x, grad, phi));

    if (k % 25 == 0) {
      res.gap_certificate = std::max(res.objective - lower, 0.0);
      if (res.gap_certificate <= eps_x) {
        res.certified = true;
        res.iterations = k + 1;
        return res;
      }
    }
    const double step = pgm_step_size(step_rule, k, kappa, p.rho, d);
    for (int i = 0; i < d; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      x[u] = std::clamp(x[u] - step * grad[u], 0.0, 1.0);
    }
  }
  res.gap_certificate = std::max(res.objective - lower, 0.0);
  res.certified = res.gap_certificate <= eps_x;
  res.iterations = k;
  return res;
}

namespace {

// All 2^d values of G(X) - y(X), plus popcounts, indexed by bitmask.
struct MaskTables {
  std::vector<double> g;      // G values
  std::vector<double> ysum;   // y(X)
  std::vector<int> popcount;  // |X|
};

MaskTables build_tables(const SetFunction& g, const std::vector<double>& y) {
  const int d = g.ground.d;
  if (d > 20) throw std::runtime_error("exact_box_prox: unsupported, d > 20");
  const std::uint32_t n = 1u << d;
  MaskTables t;
  t.g.resize(n);
  t.ysum.resize(n);
  t.popcount.resize(n);
  t.g[0] = 0.0;
  t.ysum[0] = 0.0;
  t.popcount[0] = 0;
  for (std::uint32_t m = 1; m < n; ++m) {
    t.g[m] = evaluate(g, Subset::from_mask(m, d));
    const int low = std::countr_zero(m);
    t.ysum[m] = t.ysum[m & (m - 1)] + y[static_cast<std::size_t>(low)];
    t.popcount[m] = t.popcount[m & (m - 1)] + 1;
  }
  return t;
}

// Union of all minimizers of G(X) - y(X) + rho*t*|X| (a minimizer itself,
// by the lattice property of submodular minimizers).
std::uint32_t maximal_minimizer(const MaskTables& t, double rho, double level) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t m = 0; m < t.g.size(); ++m)
    best = std::min(best, t.g[m] - t.ysum[m] + rho * level * t.popcount[m]);
  std::uint32_t u = 0;
  for (std::uint32_t m = 0; m < t.g.size(); ++m)
    if (t.g[m] - t.ysum[m] + rho * level * t.popcount[m] <= best + 1e-12) u |= m;
  return u;
}

}  // namespace

PgmResult exact_box_prox(const PgmProblem& p) {
  const int d = p.G.ground.d;
  if (static_cast<int>(p.linear.size()) != d)
    throw std::invalid_argument("exact_box_prox: linear term dimension mismatch");
  if (p.G.modular_weights) return modular_closed_form(p);
  const MaskTables tables = build_tables(p.G, p.linear);

  PgmResult res;
  res.certified = true;
  res.gap_certificate = 0.0;
  res.iterations = 0;

  if (p.rho == 0.0) {
    // The box minimum is attained at a vertex; scan all of them.
    std::uint32_t best_mask = 0;
    double best = 0.0;
    for (std::uint32_t m = 1; m < tables.g.size(); ++m) {
      const double v = tables.g[m] - tables.ysum[m];
      if (v < best) {
        best = v;
        best_mask = m;
      }
    }
    res.x = indicator(Subset::from_mask(best_mask, d));
    res.objective = best;
    return res;
  }

  // rho > 0: the unique unconstrained prox solution has x_i equal to the
  // level at which i drops out of the parametric minimizer; the box solution
  // is its clipping.
  double max_abs_g = 0.0;
  for (double v : tables.g) max_abs_g = std::max(max_abs_g, std::abs(v));
  double lo0 = std::numeric_limits<double>::infinity();
  double hi0 = -std::numeric_limits<double>::infinity();
  for (double yi : p.linear) {
    lo0 = std::min(lo0, (yi - 2.0 * max_abs_g - 1.0) / p.rho);
    hi0 = std::max(hi0, (yi + 2.0 * max_abs_g + 1.0) / p.rho);
  }

  res.x.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((maximal_minimizer(tables, p.rho, mid) >> i) & 1u)
        lo = mid;
      else
        hi = mid;
    }
    res.x[static_cast<std::size_t>(i)] = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
  }
  res.objective = lovasz_eval(p.G, res.x) - inner(p.linear, res.x) +
                  0.5 * p.rho * sq_norm(res.x);
  return res;
}

PgmResult solve_g_subproblem(const DSInstance& inst, const std::vector<double>& y,
                             const std::vector<double>& x0, double eps_x,
                             const InnerOptions& opts) {
  PgmProblem p;
  p.G = inst.G;
  p.linear = y;
  p.rho = inst.rho;
  p.x0 = x0;
  if (opts.mode == InnerMode::exact) return exact_box_prox(p);
  return pgm_solve(p, eps_x, opts.pgm_max_iter,
                   inst.rho > 0.0 ? StepRule::rho_pos : StepRule::rho_zero);
}

PhiValue eval_phi(const PhiObjective& phi, const std::vector<double>& w,
                  double eps_x_inner, const InnerOptions& opts) {
  const PgmResult sol =
      solve_g_subproblem(*phi.instance, w, phi.x_anchor, eps_x_inner, opts);
  PhiValue out;
  // phi(w) = <w, x> - g*(w) and g*(w) = -min_x g(x) - <w, x>.
  out.phi = inner(w, phi.x_anchor) + sol.objective;
  out.x_tilde = sol.x;
  out.gap_certificate = sol.gap_certificate;
  out.certified = sol.certified;
  return out;
}

BasePoint linmin_subdiff(const std::vector<double>& s, const std::vector<double>& x,
                         const SetFunction& h, double rho) {
  std::vector<double> neg_s(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) neg_s[i] = -s[i];
  BasePoint bp = greedy_subgradient(h, sort_decreasing(x, &neg_s));
  for (std::size_t i = 0; i < x.size(); ++i) bp.y[i] += rho * x[i];
  return bp;
}

FwResult fw_concave_min(const PhiObjective& phi, const BasePoint& w0, double eps,
                        int T, double eps_x_inner, const InnerOptions& opts) {
  const SetFunction& h = phi.instance->H;
  const double rho = phi.instance->rho;

  FwResult res;
  res.phi_best = std::numeric_limits<double>::infinity();
  BasePoint w = w0;
  for (int t = 0; t < std::max(T, 1); ++t) {
    const PhiValue pv = eval_phi(phi, w.y, eps_x_inner, opts);
    res.inner_certified = res.inner_certified && pv.certified;

    std::vector<double> s(phi.x_anchor.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = phi.x_anchor[i] - pv.x_tilde[i];
    const BasePoint v = linmin_subdiff(s, phi.x_anchor, h, rho);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) gap += s[i] * (w.y[i] - v.y[i]);

    res.gap_history.push_back(gap);
    res.phi_history.push_back(pv.phi);
    ++res.iterations;
    if (pv.phi < res.phi_best) {
      res.phi_best = pv.phi;
      res.w_best = w;
      res.x_at_best = pv.x_tilde;
      res.gap_at_best = gap;
      res.inner_gap_at_best = pv.gap_certificate;
    }
    if (gap <= eps) break;
    w = v;  // greedy step size: gamma = 1
  }
  return res;
}

std::vector<BasePoint> subdiff_vertices(const SetFunction& h,
                                        const std::vector<double>& x, double rho,
                                        int cap) {
  const Permutation base = sort_decreasing(x);
  const int d = base.size();

  // Tie blocks of x in decreasing order; elements ascending within a block.
  std::vector<std::vector<int>> blocks;
  for (int k = 0; k < d; ++k) {
    const int e = base.order[static_cast<std::size_t>(k)];
    if (k == 0 || x[static_cast<std::size_t>(e)] !=
                      x[static_cast<std::size_t>(base.order[static_cast<std::size_t>(k - 1)])])
      blocks.emplace_back();
    blocks.back().push_back(e);
  }

  double count = 1.0;
  for (const auto& b : blocks)
    for (std::size_t j = 2; j <= b.size(); ++j) count *= static_cast<double>(j);
  if (count > static_cast<double>(cap))
    throw std::runtime_error("subdiff_vertices: vertex count exceeds cap");

  std::vector<std::vector<int>> orders;
  std::vector<int> current;
  auto recurse = [&](auto&& self, std::size_t bi) -> void {
    if (bi == blocks.size()) {
      orders.push_back(current);
      return;
    }
    std::vector<int> block = blocks[bi];
    std::sort(block.begin(), block.end());
    do {
      current.insert(current.end(), block.begin(), block.end());
      self(self, bi + 1);
      current.resize(current.size() - block.size());
    } while (std::next_permutation(block.begin(), block.end()));
  };
  recurse(recurse, 0);

  std::map<std::vector<double>, Permutation> distinct;
  for (const auto& order : orders) {
    Permutation sigma{order};
    BasePoint bp = greedy_subgradient(h, sigma);
    for (std::size_t i = 0; i < bp.y.size(); ++i) bp.y[i] += rho * x[i];
    distinct.emplace(bp.y, sigma);
  }
  std::vector<BasePoint> out;
  out.reserve(distinct.size());
  for (auto& [y, sigma] : distinct) out.push_back(BasePoint{y, sigma});
  return out;
}

FwResult concave_min_vertex_enum(const PhiObjective& phi, double eps_x_inner,
                                 const InnerOptions& opts) {
  const std::vector<BasePoint> vertices = subdiff_vertices(
      phi.instance->H, phi.x_anchor, phi.instance->rho, opts.vertex_enum_cap);

  FwResult res;
  res.phi_best = std::numeric_limits<double>::infinity();
  for (const BasePoint& w : vertices) {
    const PhiValue pv = eval_phi(phi, w.y, eps_x_inner, opts);
    res.inner_certified = res.inner_certified && pv.certified;
    ++res.iterations;
    if (pv.phi < res.phi_best) {
      res.phi_best = pv.phi;
      res.w_best = w;
      res.x_at_best = pv.x_tilde;
      res.inner_gap_at_best = pv.gap_certificate;
    }
  }
  // Stationarity measure at the accepted vertex.
  std::vector<double> s(phi.x_anchor.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = phi.x_anchor[i] - res.x_at_best[i];
  const BasePoint v = linmin_subdiff(s, phi.x_anchor, phi.instance->H,
                                     phi.instance->rho);
  res.gap_at_best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    res.gap_at_best += s[i] * (res.w_best.y[i] - v.y[i]);
  res.gap_history.push_back(res.gap_at_best);
  return res;
}

}  // namespace dsmin
