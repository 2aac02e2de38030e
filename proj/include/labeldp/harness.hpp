// Copyright 2026 The labeldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Benchmark harness: runs (method, K, trial) cells of the synthetic
// experiment grid, aggregates rows, and serializes them as CSV or an SVG
// accuracy plot. All randomness is derived from a single master seed, so
// results are bit-reproducible for a given config, including under
// parallelism (every cell owns an independent derived stream).

#ifndef LABELDP_HARNESS_HPP
#define LABELDP_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "labeldp/knn.hpp"
#include "labeldp/random.hpp"
#include "labeldp/types.hpp"

namespace labeldp::harness {

// Enum order is load-bearing: the enumerator value feeds seed derivation,
// so reordering changes every stream. Append only.
enum class Method {
  kBayes = 0,         // non-private Bayes rule (accuracy ceiling)
  kRandomizedResponse = 1,
  kLpTwoStage = 2,    // two-stage RR + prior-restricted RR
  kAlibi = 3,
  kVectorApprox = 4,
};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

// Noise level rule: a fixed sigma, or sigma = 2/K tracking the class count.
struct SigmaRule {
  bool two_over_k = false;
  Scalar value = Scalar(0.05);
};

Scalar resolve_sigma(const SigmaRule& rule, int num_classes);

struct ExperimentConfig {
  std::vector<int> class_grid{2, 5, 10, 20, 50, 100};
  SigmaRule sigma;
  Index n_train = 10000;
  std::vector<Method> methods{Method::kBayes, Method::kRandomizedResponse,
                              Method::kLpTwoStage, Method::kAlibi,
                              Method::kVectorApprox};
  Scalar epsilon = 1;
  int k_neighbors = 200;
  int trials = 50;
  Index test_size = 2000;
  std::uint64_t master_seed = 1;
  std::string out_dir = "results";
  std::string format = "csv";  // csv | plot | both
  int parallelism = 1;
  // Off by default: recorded wall times vary run to run and would break the
  // byte-identical-output guarantee. wall_time_ms is written as 0 unless
  // this is enabled.
  bool record_timing = false;

  void validate() const;  // throws std::invalid_argument
};

// key=value config file ('#' starts a comment line). Keys: classes, sigma,
// n, methods, epsilon, k, trials, test_size, seed, out, format,
// parallelism, timing. Unknown keys are an error.
ExperimentConfig load_config(const std::string& path);

// Applies one key=value pair; shared by the file loader and CLI overrides
// so both spell keys identically.
void apply_key(ExperimentConfig& config, const std::string& key,
               const std::string& value);

// One fully-resolved cell of the grid.
struct TrialSpec {
  Method method = Method::kBayes;
  int num_classes = 2;
  Scalar sigma = Scalar(0.05);
  Scalar epsilon = 1;
  Index n_train = 10000;
  int k_neighbors = 200;
  Index test_size = 2000;
  int trial = 0;
  std::uint64_t master_seed = 1;
  bool record_timing = false;
};

struct ResultRow {
  Method method = Method::kBayes;
  int num_classes = 0;
  Scalar sigma = 0;
  Scalar epsilon = 0;
  int k_neighbors = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Scalar accuracy = 0;
  Scalar excess_risk = 0;
  double wall_time_ms = 0;
  std::string error;  // empty on success; failed cells carry the message
};

// Per-trial privatization audit: how many times the randomizer consumed
// each training label. Every label of a private method must be consumed
// exactly once (the two-stage method privatizes each half exactly once).
struct TrialInstrumentation {
  std::vector<int> privatize_counts;
};

// Runs one cell: sample train/test sets from seeds derived off
// (master_seed, method, K, trial), privatize, fit, evaluate accuracy and
// the excess-risk estimate on the fresh test probes. Never throws; failures
// are reported through ResultRow::error.
ResultRow run_trial(const TrialSpec& spec,
                    TrialInstrumentation* instrumentation = nullptr);

struct ExperimentResult {
  std::vector<ResultRow> rows;  // grid order: K-major, then method, then trial
};

ExperimentResult run_sweep(const ExperimentConfig& config);

// Two-stage pipeline: plain randomized response plus a scalar kNN fit on
// the first half of the data, whose score vectors become per-sample priors
// for prior-restricted randomized response on the second half; the returned
// model is fit on that second half. Requires n >= 2 * k_neighbors.
knn::KnnModel two_stage_lp(const Eigen::Ref<const Matrix>& features,
                           const IntVector& labels, int num_classes,
                           Scalar epsilon, int k_neighbors, Rng& rng,
                           std::vector<int>* privatize_counts = nullptr);

// CSV schema: method,K,sigma,epsilon,k,trial,seed,accuracy,excess_risk,
// wall_time_ms. Doubles are written shortest-round-trip, so read_csv
// reproduces the written rows exactly. Rows with errors are not written.
void write_csv(const ExperimentResult& result, std::ostream& os);
void write_csv_file(const ExperimentResult& result, const std::string& path);
ExperimentResult read_csv(std::istream& is);
ExperimentResult read_csv_file(const std::string& path);

// Mean-accuracy-vs-K line chart (one line per method, log-scaled K axis)
// as a standalone SVG document.
std::string render_plot(const ExperimentResult& result);
void write_plot_file(const ExperimentResult& result, const std::string& path);

}  // namespace labeldp::harness

#endif  // LABELDP_HARNESS_HPP
