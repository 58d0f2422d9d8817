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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmin/harness.hpp"
#include "dsmin/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitWarnings = 2;

std::string resolve_out_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("DSMIN_OUT"); env && *env) return env;
  return flag_value;
}

dsmin::ExperimentConfig load_config(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  dsmin::ExperimentConfig cfg = dsmin::experiment_config_from_json(buffer.str());
  for (const std::string& assignment : overrides)
    cfg = dsmin::apply_override(cfg, assignment);
  return cfg;
}

void print_summary(const dsmin::ExperimentResult& result) {
  std::printf("%-8s %-10s %6s %14s %14s\n", "method", "rho", "cells", "final F gap",
              "final f gap");
  for (const dsmin::SeriesStats& s : result.summary.series) {
    int cells = 0;
    for (const dsmin::CellResult& cell : result.cells)
      if (!cell.failed && cell.method == s.method && cell.rho == s.rho) ++cells;
    std::printf("%-8s %-10g %6d %14.6g %14.6g\n", s.method.c_str(), s.rho, cells,
                s.mean_discrete_gap.empty() ? 0.0 : s.mean_discrete_gap.back(),
                s.mean_continuous_gap.empty() ? 0.0 : s.mean_continuous_gap.back());
  }
  std::printf("best discrete value: %.12g\n", result.summary.min_F);
  for (const std::string& w : result.summary.warnings)
    std::printf("warning: %s\n", w.c_str());
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir, int workers, long long seed) {
  dsmin::ExperimentConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
    if (workers > 0) cfg.workers = workers;
    if (seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(seed)};
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  const dsmin::ExperimentResult result = dsmin::run_experiment(cfg);
  const std::string dir = dsmin::persist_experiment(result, out_dir);
  print_summary(result);
  std::printf("traces written to %s\n", dir.c_str());
  for (const dsmin::CellResult& cell : result.cells)
    if (cell.failed) std::fprintf(stderr, "cell failed: %s\n", cell.error.c_str());
  return result.summary.any_non_certified ? kExitWarnings : kExitOk;
}

int cmd_verify(const std::string& level) {
  const bool full = level == "full";
  const std::vector<dsmin::verify::CheckResult> results =
      dsmin::verify::run_suite(full, std::cout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.passed) ++failures;
  if (failures > 0) {
    std::printf("%d check(s) failed\n", failures);
    return kExitUsage;
  }
  std::printf("all %zu checks passed\n", results.size());
  return kExitOk;
}

int cmd_report(const std::string& trace_dir) {
  try {
    const std::vector<dsmin::CellResult> cells = dsmin::load_traces(trace_dir);
    const dsmin::ExperimentSummary summary = dsmin::summarize(cells);
    {
      std::ofstream out(std::filesystem::path(trace_dir) / "summary.json",
                        std::ios::binary);
      out << dsmin::summary_to_json(summary) << "\n";
    }
    dsmin::emit_plot_data(summary, trace_dir);
    std::set<std::string> methods;
    for (const dsmin::CellResult& cell : cells) methods.insert(cell.method);
    if (methods.size() < 2)
      std::printf("warning: summary covers only the available method(s)\n");
    std::printf("summary and plot data regenerated under %s\n", trace_dir.c_str());
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}

int cmd_bench(const std::string& config_path, const std::vector<std::string>& overrides) {
  dsmin::ExperimentConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  const double rho = cfg.rhos.empty() ? 0.0 : cfg.rhos[0];
  const std::uint64_t seed = cfg.seeds[0];
  std::printf("%-8s %12s %10s\n", "method", "wall_ms", "final F");
  for (const std::string& method : cfg.methods) {
    const dsmin::DSInstance inst =
        dsmin::make_instance(cfg.instance, dsmin::method_uses_rho(method) ? rho : 0.0);
    const auto start = std::chrono::steady_clock::now();
    const auto [state, trace] = dsmin::run_method(method, inst, cfg.solver, seed);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%-8s %12.2f %10.4g\n", method.c_str(), ms, trace.final_value);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difference-of-submodular minimization via DC programming"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string level = "fast";
  std::string trace_dir;
  int workers = 0;
  long long seed = -1;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config JSON")->required();
  run->add_option("--set", overrides, "override config entries (key=value)");
  run->add_option("--out", out_dir, "output directory (env DSMIN_OUT wins)");
  run->add_option("--workers", workers, "concurrent cells");
  run->add_option("--seed", seed, "run a single seed");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle-backed invariant suite");
  verify->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  CLI::App* report = app.add_subcommand("report", "rebuild summary and plots from traces");
  report->add_option("trace_dir", trace_dir, "experiment trace directory")->required();

  CLI::App* bench = app.add_subcommand("bench", "time each configured method once");
  bench->add_option("--config", config_path, "experiment config JSON")->required();
  bench->add_option("--set", overrides, "override config entries (key=value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) return cmd_run(config_path, overrides, resolve_out_dir(out_dir), workers, seed);
  if (verify->parsed()) return cmd_verify(level);
  if (report->parsed()) return cmd_report(trace_dir);
  if (bench->parsed()) return cmd_bench(config_path, overrides);
  return kExitUsage;
}
