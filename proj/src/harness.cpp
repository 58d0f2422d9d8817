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

#include "dsmin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "dsmin/rng.hpp"
#include "json.hpp"

namespace dsmin {

namespace {

using nlohmann::json;

std::string shortest_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string full_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DSInstance SpeechInstance::to_ds(double rho) const {
  const int d = static_cast<int>(incidence.size());
  const int words = n_words;
  auto covers = std::make_shared<std::vector<std::vector<std::uint64_t>>>();
  const int block = (words + 63) / 64;
  covers->assign(static_cast<std::size_t>(d),
                 std::vector<std::uint64_t>(static_cast<std::size_t>(block), 0));
  for (int u = 0; u < d; ++u)
    for (int w : incidence[static_cast<std::size_t>(u)])
      (*covers)[static_cast<std::size_t>(u)][static_cast<std::size_t>(w) >> 6] |=
          std::uint64_t{1} << (w & 63);

  const double lam = lambda;
  SetFunction g;
  g.ground = GroundSet(d);
  g.eval = [covers, lam, block](const Subset& x) {
    std::vector<std::uint64_t> acc(static_cast<std::size_t>(block), 0);
    for (int e : x.elements())
      for (int b = 0; b < block; ++b)
        acc[static_cast<std::size_t>(b)] |= (*covers)[static_cast<std::size_t>(e)]
                                                    [static_cast<std::size_t>(b)];
    int covered = 0;
    for (std::uint64_t w : acc) covered += std::popcount(w);
    return lam * std::sqrt(static_cast<double>(covered));
  };
  g.nondecreasing = true;
  g.value_bound = lam * std::sqrt(static_cast<double>(words));

  DSInstance inst;
  inst.G = g;
  inst.H = make_concave_of_modular(groups, m);
  inst.rho = rho;
  return inst;
}

SpeechInstance gen_speech_synthetic(std::uint64_t seed, int d, int n_words, int r,
                                    double lambda) {
  if (d < 1 || n_words < 1 || r < 1)
    throw std::invalid_argument("gen_speech_synthetic: sizes must be >= 1");
  if (r > d) throw std::invalid_argument("gen_speech_synthetic: r > d");

  Rng rng(seed);
  SpeechInstance s;
  s.n_words = n_words;
  s.lambda = lambda;
  s.incidence.resize(static_cast<std::size_t>(d));
  for (auto& utterance : s.incidence) {
    const int size = std::min(rng.next_geometric(0.35), n_words);
    std::set<int> words;
    while (static_cast<int>(words.size()) < size)
      words.insert(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_words))));
    utterance.assign(words.begin(), words.end());
  }
  s.m.resize(static_cast<std::size_t>(d));
  for (double& w : s.m) w = rng.next_double();
  s.groups.resize(static_cast<std::size_t>(r));
  for (int g = 0; g < r; ++g) {
    const int lo = static_cast<int>(static_cast<long long>(g) * d / r);
    const int hi = static_cast<int>(static_cast<long long>(g + 1) * d / r);
    for (int e = lo; e < hi; ++e) s.groups[static_cast<std::size_t>(g)].push_back(e);
  }
  return s;
}

DSInstance FeatureInstance::to_ds(double rho) const {
  const int d = static_cast<int>(data.empty() ? 0 : data[0].size());
  DSInstance inst;
  inst.H = make_empirical_entropy(data);
  const SetFunction conditional = make_conditional_entropy(data, class_labels);
  inst.G = sum(make_modular(std::vector<double>(static_cast<std::size_t>(d), lambda)),
               conditional);
  inst.G.nondecreasing = true;
  inst.rho = rho;
  return inst;
}

FeatureInstance build_feature_instance(const std::string& csv_path,
                                       const std::string& class_column, double lambda,
                                       double train_fraction, std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction > 1.0)
    throw std::invalid_argument("build_feature_instance: train_fraction in (0,1]");
  const BinaryCsv csv = load_binary_csv(csv_path);

  int class_idx = -1;
  for (std::size_t c = 0; c < csv.header.size(); ++c)
    if (csv.header[c] == class_column) class_idx = static_cast<int>(c);
  if (class_idx < 0)
    throw std::invalid_argument("build_feature_instance: no column named '" +
                                class_column + "'");

  std::vector<int> rows(csv.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  if (train_fraction < 1.0) {
    Rng rng(seed);
    rng.shuffle(rows);
    const std::size_t keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(train_fraction * static_cast<double>(rows.size())));
    rows.resize(keep);
    std::sort(rows.begin(), rows.end());
  }

  FeatureInstance inst;
  inst.lambda = lambda;
  for (std::size_t c = 0; c < csv.header.size(); ++c)
    if (static_cast<int>(c) != class_idx) inst.feature_names.push_back(csv.header[c]);
  for (int r : rows) {
    const auto& row = csv.rows[static_cast<std::size_t>(r)];
    std::vector<std::uint8_t> features;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (static_cast<int>(c) != class_idx) features.push_back(row[c]);
    inst.data.push_back(std::move(features));
    inst.class_labels.push_back(row[static_cast<std::size_t>(class_idx)]);
  }
  return inst;
}

DSInstance make_instance(const InstanceSpec& spec, double rho) {
  if (spec.type == "tiny_a") {
    DSInstance inst;
    inst.G = make_modular({spec.alpha, spec.alpha, spec.alpha});
    inst.H = make_set_cover(3, {{0}, {0, 1}, {0, 1, 2}}, spec.alpha);
    inst.rho = rho;
    return inst;
  }
  if (spec.type == "tiny_c") {
    DSInstance inst;
    inst.G = make_set_cover(3, {{0}, {1}, {1}, {2}, {2}}, spec.alpha);
    inst.H = make_set_cover(3, {{0}, {1}, {2}, {0}, {0}}, spec.alpha);
    inst.rho = rho;
    return inst;
  }
  if (spec.type == "speech_synthetic")
    return gen_speech_synthetic(spec.gen_seed, spec.d, spec.n_words, spec.r, spec.lambda)
        .to_ds(rho);
  if (spec.type == "feature_csv")
    return build_feature_instance(spec.csv_path, spec.class_column, spec.lambda,
                                  spec.train_fraction, spec.gen_seed)
        .to_ds(rho);
  throw std::invalid_argument("make_instance: unknown instance type '" + spec.type + "'");
}

namespace {

json instance_to_json(const InstanceSpec& s) {
  json j;
  j["type"] = s.type;
  j["alpha"] = s.alpha;
  j["d"] = s.d;
  j["n_words"] = s.n_words;
  j["r"] = s.r;
  j["lambda"] = s.lambda;
  j["gen_seed"] = s.gen_seed;
  j["csv_path"] = s.csv_path;
  j["class_column"] = s.class_column;
  j["train_fraction"] = s.train_fraction;
  return j;
}

InstanceSpec instance_from_json(const json& j) {
  InstanceSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "type") s.type = value.get<std::string>();
    else if (key == "alpha") s.alpha = value.get<double>();
    else if (key == "d") s.d = value.get<int>();
    else if (key == "n_words") s.n_words = value.get<int>();
    else if (key == "r") s.r = value.get<int>();
    else if (key == "lambda") s.lambda = value.get<double>();
    else if (key == "gen_seed") s.gen_seed = value.get<std::uint64_t>();
    else if (key == "csv_path") s.csv_path = value.get<std::string>();
    else if (key == "class_column") s.class_column = value.get<std::string>();
    else if (key == "train_fraction") s.train_fraction = value.get<double>();
    else throw std::invalid_argument("instance spec: unknown key '" + key + "'");
  }
  return s;
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["instance"] = instance_to_json(cfg.instance);
  j["methods"] = cfg.methods;
  j["rhos"] = cfg.rhos;
  j["seeds"] = cfg.seeds;
  j["solver"] = json::parse(solver_config_to_json(cfg.solver));
  j["workers"] = cfg.workers;
  return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") cfg.name = value.get<std::string>();
    else if (key == "instance") cfg.instance = instance_from_json(value);
    else if (key == "methods") cfg.methods = value.get<std::vector<std::string>>();
    else if (key == "rhos") cfg.rhos = value.get<std::vector<double>>();
    else if (key == "seeds") cfg.seeds = value.get<std::vector<std::uint64_t>>();
    else if (key == "solver") cfg.solver = solver_config_from_json(value.dump());
    else if (key == "workers") cfg.workers = value.get<int>();
    else throw std::invalid_argument("experiment config: unknown key '" + key + "'");
  }
  if (cfg.methods.empty()) throw std::invalid_argument("experiment config: empty methods");
  if (cfg.seeds.empty()) throw std::invalid_argument("experiment config: empty seeds");
  return cfg;
}

ExperimentConfig apply_override(const ExperimentConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json j = json::parse(experiment_config_to_json(cfg));
  json* node = &j;
  std::stringstream ss(path);
  std::vector<std::string> segments;
  for (std::string seg; std::getline(ss, seg, '.');) segments.push_back(seg);
  if (segments.empty()) throw std::invalid_argument("override: empty key");
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (!node->contains(segments[i]))
      throw std::invalid_argument("override: unknown key '" + path + "'");
    node = &(*node)[segments[i]];
  }
  const std::string& leaf = segments.back();
  if (!node->contains(leaf))
    throw std::invalid_argument("override: unknown key '" + path + "'");

  json& slot = (*node)[leaf];
  auto parse_scalar = [](const std::string& text) -> json {
    try {
      return json::parse(text);
    } catch (const json::parse_error&) {
      return json(text);
    }
  };
  if (slot.is_array()) {
    json arr = json::array();
    std::stringstream items(value);
    for (std::string item; std::getline(items, item, ',');)
      arr.push_back(parse_scalar(item));
    slot = arr;
  } else if (slot.is_string()) {
    slot = value;
  } else {
    slot = parse_scalar(value);
  }
  return experiment_config_from_json(j.dump());
}

bool method_uses_rho(const std::string& m) {
  return m == "dca" || m == "dcar" || m == "adca" || m == "adcar" || m == "cdca" ||
         m == "cdcar";
}

bool method_is_continuous(const std::string& m) {
  return method_uses_rho(m) || m == "pgm";
}

RunResult run_method(const std::string& method, const DSInstance& inst,
                     const SolverConfig& base, std::uint64_t seed) {
  SolverConfig cfg = base;
  cfg.seed = seed;
  cfg.rho = inst.rho;
  const int d = inst.d();
  const std::vector<double> x0(static_cast<std::size_t>(d), 0.0);
  const Subset X0(d);

  if (method == "dca" || method == "adca") {
    cfg.accelerate = method == "adca";
    cfg.round_each_iter = false;
    return dca_run(inst, cfg, x0);
  }
  if (method == "dcar" || method == "adcar") {
    cfg.accelerate = method == "adcar";
    return dcar_run(inst, cfg, X0);
  }
  if (method == "cdca") {
    cfg.round_each_iter = false;
    return cdca_run(inst, cfg, x0);
  }
  if (method == "cdcar") return cdcar_run(inst, cfg, X0);
  if (method == "subsup") return subsup_run(inst, cfg, X0);
  if (method == "supsub") return supsub_run(inst, cfg, X0);
  if (method == "modmod") return modmod_run(inst, cfg, X0);
  if (method == "pgm") return pgm_direct_run(inst, cfg, x0);
  if (method == "greedy") {
    const Subset x = double_greedy_max(negate(inst.objective_handle()), seed);
    IterateState state;
    state.x = indicator(x);
    state.X_rounded = x;
    state.F_disc = inst.objective(x);
    state.f_cont = state.F_disc;
    SolverTrace trace;
    trace.method = "greedy";
    trace.converged = true;
    trace.certificate = cert_bound(0.0, d, cfg.eps_stop, cfg.eps_x);
    TraceRecord r0;
    trace.records.push_back(r0);
    TraceRecord r1;
    r1.k = 1;
    r1.F_disc = state.F_disc;
    r1.f_cont = state.F_disc;
    trace.records.push_back(r1);
    trace.final_set = x;
    trace.final_value = state.F_disc;
    return {state, trace};
  }
  throw std::invalid_argument("run_method: unknown method '" + method + "'");
}

namespace {

struct CellSpec {
  std::string method;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  std::vector<CellSpec> specs;
  std::vector<double> base_rhos = cfg.rhos.empty() ? std::vector<double>{0.0} : cfg.rhos;
  for (const std::string& method : cfg.methods) {
    const std::vector<double> rhos =
        method_uses_rho(method) ? base_rhos : std::vector<double>{0.0};
    for (double rho : rhos)
      for (std::uint64_t seed : cfg.seeds) specs.push_back({method, rho, seed});
  }

  // One instance per distinct rho; handles are shared and immutable.
  std::map<double, DSInstance> instances;
  for (const CellSpec& s : specs)
    if (!instances.count(s.rho)) instances.emplace(s.rho, make_instance(cfg.instance, s.rho));

  ExperimentResult result;
  result.config = cfg;
  result.cells.resize(specs.size());

  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= specs.size()) break;
      const CellSpec& s = specs[i];
      CellResult& cell = result.cells[i];
      cell.method = s.method;
      cell.rho = s.rho;
      cell.seed = s.seed;
      try {
        cell.trace = run_method(s.method, instances.at(s.rho), cfg.solver, s.seed).second;
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };
  const int workers = std::max(cfg.workers, 1);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  result.summary = summarize(result.cells);
  return result;
}

ExperimentSummary summarize(const std::vector<CellResult>& cells) {
  ExperimentSummary summary;
  summary.min_F = std::numeric_limits<double>::infinity();
  summary.min_f = std::numeric_limits<double>::infinity();
  for (const CellResult& cell : cells) {
    if (cell.failed) {
      summary.warnings.push_back("cell " + cell.method + " rho=" + shortest_double(cell.rho) +
                                 " seed=" + std::to_string(cell.seed) +
                                 " failed: " + cell.error);
      continue;
    }
    summary.any_non_certified =
        summary.any_non_certified || !cell.trace.all_inner_certified;
    for (const TraceRecord& r : cell.trace.records) {
      summary.min_F = std::min(summary.min_F, r.F_disc);
      if (method_is_continuous(cell.method))
        summary.min_f = std::min(summary.min_f, r.f_cont);
    }
    summary.min_F = std::min(summary.min_F, cell.trace.final_value);
  }
  if (!std::isfinite(summary.min_f)) summary.min_f = summary.min_F;

  // Group cells by (method, rho); order lexicographically for stable output.
  std::map<std::pair<std::string, double>, std::vector<const CellResult*>> groups;
  for (const CellResult& cell : cells)
    if (!cell.failed) groups[{cell.method, cell.rho}].push_back(&cell);

  for (const auto& [key, members] : groups) {
    SeriesStats stats;
    stats.method = key.first;
    stats.rho = key.second;
    std::size_t max_len = 0;
    for (const CellResult* cell : members)
      max_len = std::max(max_len, cell->trace.records.size());

    for (std::size_t t = 0; t < max_len; ++t) {
      auto column = [&](bool discrete) {
        std::vector<double> vals;
        for (const CellResult* cell : members) {
          const auto& recs = cell->trace.records;
          // A finished run holds its last value.
          const TraceRecord& r = t < recs.size() ? recs[t] : recs.back();
          vals.push_back(discrete ? r.F_disc - summary.min_F : r.f_cont - summary.min_f);
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        const double stddev =
            vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
        return std::pair<double, double>{mean, stddev};
      };
      const auto [dm, ds] = column(true);
      const auto [cm, cs] = column(false);
      stats.mean_discrete_gap.push_back(dm);
      stats.std_discrete_gap.push_back(ds);
      stats.mean_continuous_gap.push_back(cm);
      stats.std_continuous_gap.push_back(cs);
    }
    summary.series.push_back(std::move(stats));
  }

  // Soft expectation at desk scale: the DC family should not trail the
  // cheap surrogate baseline on most seeds. Logged, never fatal.
  std::map<std::uint64_t, double> modmod_final;
  for (const CellResult& cell : cells)
    if (!cell.failed && cell.method == "modmod") modmod_final[cell.seed] = cell.trace.final_value;
  if (!modmod_final.empty()) {
    std::map<std::pair<std::string, double>, std::pair<int, int>> tally;
    for (const CellResult& cell : cells) {
      if (cell.failed || !method_uses_rho(cell.method)) continue;
      if (!modmod_final.count(cell.seed)) continue;
      auto& [ok, total] = tally[{cell.method, cell.rho}];
      ++total;
      if (cell.trace.final_value <= modmod_final[cell.seed] + 1e-9) ++ok;
    }
    for (const auto& [key, counts] : tally) {
      if (counts.second >= 3 && counts.first * 3 < counts.second * 2)
        summary.warnings.push_back(
            "soft check: " + key.first + " rho=" + shortest_double(key.second) + " beat modmod on only " +
            std::to_string(counts.first) + "/" + std::to_string(counts.second) + " seeds");
    }
  }
  return summary;
}

std::string summary_to_json(const ExperimentSummary& summary) {
  json j;
  j["min_F"] = summary.min_F;
  j["min_f"] = summary.min_f;
  j["any_non_certified"] = summary.any_non_certified;
  j["warnings"] = summary.warnings;
  json series = json::array();
  for (const SeriesStats& s : summary.series) {
    json e;
    e["method"] = s.method;
    e["rho"] = s.rho;
    e["mean_discrete_gap"] = s.mean_discrete_gap;
    e["std_discrete_gap"] = s.std_discrete_gap;
    e["mean_continuous_gap"] = s.mean_continuous_gap;
    e["std_continuous_gap"] = s.std_continuous_gap;
    series.push_back(std::move(e));
  }
  j["series"] = std::move(series);
  return j.dump(2);
}

std::string persist_experiment(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_dir) / result.config.name;
  fs::create_directories(dir);

  for (const CellResult& cell : result.cells) {
    if (cell.failed) continue;
    const std::string name = cell.method + "-" + shortest_double(cell.rho) + "-" +
                             std::to_string(cell.seed) + ".jsonl";
    std::ofstream out(dir / name, std::ios::binary);
    out << trace_to_jsonl(cell.trace);
  }
  {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary_to_json(result.summary) << "\n";
  }
  {
    std::ofstream out(dir / "config.json", std::ios::binary);
    out << experiment_config_to_json(result.config) << "\n";
  }
  emit_plot_data(result.summary, dir.string());
  return dir.string();
}

std::vector<CellResult> load_traces(const std::string& experiment_dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(experiment_dir))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("load_traces: no .jsonl traces in " + experiment_dir);

  std::vector<CellResult> cells;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    const std::size_t first = stem.find('-');
    const std::size_t last = stem.rfind('-');
    if (first == std::string::npos || last == first)
      throw std::runtime_error("load_traces: unrecognized trace name " + stem);
    CellResult cell;
    cell.method = stem.substr(0, first);
    cell.rho = std::stod(stem.substr(first + 1, last - first - 1));
    cell.seed = std::stoull(stem.substr(last + 1));
    std::ifstream in(file, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      cell.trace = trace_from_jsonl(buffer.str());
    } catch (const std::exception& e) {
      throw std::runtime_error(file.filename().string() + ": " + e.what());
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

void emit_plot_data(const ExperimentSummary& summary, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const SeriesStats& s : summary.series) {
    const std::string name = "plot-" + s.method + "-" + shortest_double(s.rho) + ".csv";
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("emit_plot_data: cannot write " + name);
    out << "# gaps are relative to the best value over all compared methods, "
           "floored at 1e-12 for log-scale plotting\n";
    out << "iteration,mean_discrete_gap,std_discrete_gap,mean_continuous_gap,"
           "std_continuous_gap\n";
    const auto floored = [](double v) { return std::max(v, 1e-12); };
    for (std::size_t t = 0; t < s.mean_discrete_gap.size(); ++t)
      out << t << "," << full_double(floored(s.mean_discrete_gap[t])) << ","
          << full_double(s.std_discrete_gap[t]) << ","
          << full_double(floored(s.mean_continuous_gap[t])) << ","
          << full_double(s.std_continuous_gap[t]) << "\n";
  }
}

}  // namespace dsmin
