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

#ifndef DSMIN_HARNESS_HPP
#define DSMIN_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsmin/baselines.hpp"
#include "dsmin/dc_solvers.hpp"
#include "dsmin/instances.hpp"

namespace dsmin {

// Utterance-selection style instance: F(X) = lambda*sqrt(|N(X)|) -
// sum_i sqrt(m(X n V_i)) with N(X) the set of distinct words covered by X.
struct SpeechInstance {
  std::vector<std::vector<int>> incidence;  // utterance -> word ids
  int n_words = 0;
  std::vector<double> m;
  std::vector<std::vector<int>> groups;
  double lambda = 1.0;

  DSInstance to_ds(double rho) const;
};

// Seeded generator: geometric cover sizes (at least one word), uniform
// weights, r groups of consecutive indices.
SpeechInstance gen_speech_synthetic(std::uint64_t seed, int d, int n_words, int r,
                                    double lambda);

// Feature-selection instance: F(X) = lambda*|X| - I(U_X; C) decomposed as
// G = lambda*|X| + H(U_X | C) and H = H(U_X), entropies estimated from the
// training rows.
struct FeatureInstance {
  std::vector<std::vector<std::uint8_t>> data;  // training rows, feature cols
  std::vector<int> class_labels;
  std::vector<std::string> feature_names;
  double lambda = 1e-4;

  DSInstance to_ds(double rho) const;
};

FeatureInstance build_feature_instance(const std::string& csv_path,
                                       const std::string& class_column, double lambda,
                                       double train_fraction, std::uint64_t seed);

struct InstanceSpec {
  std::string type = "speech_synthetic";  // tiny_a | tiny_c | speech_synthetic | feature_csv
  double alpha = 1.0;                     // tiny instances
  int d = 50;                             // speech
  int n_words = 150;
  int r = 10;
  double lambda = 1.0;
  std::uint64_t gen_seed = 1;
  std::string csv_path;  // feature_csv
  std::string class_column = "class";
  double train_fraction = 0.7;
};

DSInstance make_instance(const InstanceSpec& spec, double rho);

struct ExperimentConfig {
  std::string name = "experiment";
  InstanceSpec instance;
  std::vector<std::string> methods = {"dca",    "dcar",   "adca", "adcar",
                                      "cdca",   "cdcar",  "subsup", "supsub",
                                      "modmod", "pgm",    "greedy"};
  std::vector<double> rhos = {0.0, 0.001, 0.01, 0.1, 1.0, 10.0};
  std::vector<std::uint64_t> seeds = {42, 43, 44};
  SolverConfig solver;  // shared budgets and switches
  int workers = 1;
};

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);

// Applies a `key=value` override (dotted paths, comma lists for arrays) to
// the JSON form of a config; unknown keys are rejected.
ExperimentConfig apply_override(const ExperimentConfig& cfg, const std::string& assignment);

// Runs one method cell; baselines that ignore rho expect rho = 0.
RunResult run_method(const std::string& method, const DSInstance& inst,
                     const SolverConfig& cfg, std::uint64_t seed);

bool method_uses_rho(const std::string& method);
bool method_is_continuous(const std::string& method);  // plots f_L

struct CellResult {
  std::string method;
  double rho = 0.0;
  std::uint64_t seed = 0;
  SolverTrace trace;
  bool failed = false;
  std::string error;
};

struct SeriesStats {
  std::string method;
  double rho = 0.0;
  std::vector<double> mean_discrete_gap;
  std::vector<double> std_discrete_gap;
  std::vector<double> mean_continuous_gap;
  std::vector<double> std_continuous_gap;
};

struct ExperimentSummary {
  double min_F = 0.0;  // best discrete value over all compared methods
  double min_f = 0.0;  // best continuous value over the continuous methods
  std::vector<SeriesStats> series;
  std::vector<std::string> warnings;
  bool any_non_certified = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  ExperimentSummary summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Recomputes the summary from traces alone (shared by run and report).
ExperimentSummary summarize(const std::vector<CellResult>& cells);

// Persists traces as <out_dir>/<name>/<method>-<rho>-<seed>.jsonl plus
// summary.json; returns the experiment directory.
std::string persist_experiment(const ExperimentResult& result, const std::string& out_dir);

// Reads back a persisted experiment directory into cells.
std::vector<CellResult> load_traces(const std::string& experiment_dir);

std::string summary_to_json(const ExperimentSummary& summary);

// One CSV per (method, rho): iteration, mean/std discrete gap, mean/std
// continuous gap. Gaps are floored at 1e-12 (noted in the file header).
void emit_plot_data(const ExperimentSummary& summary, const std::string& out_dir);

}  // namespace dsmin

#endif  // DSMIN_HARNESS_HPP
