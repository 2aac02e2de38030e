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

#include "labeldp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "labeldp/analysis.hpp"
#include "labeldp/mechanisms.hpp"
#include "labeldp/synthetic.hpp"

namespace labeldp::harness {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kBayes:
      return "bayes";
    case Method::kRandomizedResponse:
      return "rr";
    case Method::kLpTwoStage:
      return "lp-2st";
    case Method::kAlibi:
      return "alibi";
    case Method::kVectorApprox:
      return "vector";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kBayes, Method::kRandomizedResponse,
                   Method::kLpTwoStage, Method::kAlibi,
                   Method::kVectorApprox}) {
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

Scalar resolve_sigma(const SigmaRule& rule, int num_classes) {
  if (rule.two_over_k) return Scalar(2) / Scalar(num_classes);
  return rule.value;
}

void ExperimentConfig::validate() const {
  if (class_grid.empty()) {
    throw std::invalid_argument("class grid must be non-empty");
  }
  for (int num_classes : class_grid) {
    if (num_classes < 2) {
      throw std::invalid_argument("every K must be >= 2");
    }
  }
  if (!sigma.two_over_k && !(sigma.value > Scalar(0))) {
    throw std::invalid_argument("sigma must be positive");
  }
  if (n_train < 1) throw std::invalid_argument("n must be >= 1");
  if (methods.empty()) throw std::invalid_argument("method list is empty");
  if (!(epsilon > Scalar(0))) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (k_neighbors < 1) throw std::invalid_argument("k must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (test_size < 1) throw std::invalid_argument("test_size must be >= 1");
  if (format != "csv" && format != "plot" && format != "both") {
    throw std::invalid_argument("format must be csv, plot or both");
  }
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

long long parse_integer(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse integer from '" + value +
                                "'");
  }
}

std::uint64_t parse_unsigned(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse unsigned from '" + value +
                                "'");
  }
}

Scalar parse_scalar(const std::string& value, const std::string& key) {
  const std::string t = trim(value);
  if (t == "inf" || t == "infinity") return kInfiniteEpsilon;
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return static_cast<Scalar>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse number from '" + value + "'");
  }
}

}  // namespace

void apply_key(ExperimentConfig& config, const std::string& key,
               const std::string& value) {
  if (key == "classes") {
    std::vector<int> grid;
    for (const std::string& part : split(value, ',')) {
      grid.push_back(static_cast<int>(parse_integer(part, key)));
    }
    config.class_grid = std::move(grid);
  } else if (key == "sigma") {
    const std::string t = trim(value);
    if (t == "2/K" || t == "2/k") {
      config.sigma.two_over_k = true;
    } else {
      config.sigma.two_over_k = false;
      config.sigma.value = parse_scalar(t, key);
    }
  } else if (key == "n") {
    config.n_train = static_cast<Index>(parse_integer(value, key));
  } else if (key == "methods") {
    std::vector<Method> methods;
    for (const std::string& part : split(value, ',')) {
      const std::optional<Method> m = parse_method(trim(part));
      if (!m) {
        throw std::invalid_argument("config key 'methods': unknown method '" +
                                    trim(part) + "'");
      }
      methods.push_back(*m);
    }
    config.methods = std::move(methods);
  } else if (key == "epsilon") {
    config.epsilon = parse_scalar(value, key);
  } else if (key == "k") {
    config.k_neighbors = static_cast<int>(parse_integer(value, key));
  } else if (key == "trials") {
    config.trials = static_cast<int>(parse_integer(value, key));
  } else if (key == "test_size") {
    config.test_size = static_cast<Index>(parse_integer(value, key));
  } else if (key == "seed") {
    config.master_seed = parse_unsigned(value, key);
  } else if (key == "out") {
    config.out_dir = trim(value);
  } else if (key == "format") {
    config.format = trim(value);
  } else if (key == "parallelism") {
    config.parallelism = static_cast<int>(parse_integer(value, key));
  } else if (key == "timing") {
    const std::string t = trim(value);
    if (t == "none") {
      config.record_timing = false;
    } else if (t == "wall") {
      config.record_timing = true;
    } else {
      throw std::invalid_argument("config key 'timing': expected none or wall");
    }
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  ExperimentConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                  ": expected key=value");
    }
    apply_key(config, trim(stripped.substr(0, eq)),
              trim(stripped.substr(eq + 1)));
  }
  return config;
}

namespace {

Matrix alibi_soft_targets(const IntVector& labels, int num_classes,
                          Scalar epsilon, Rng& rng,
                          std::vector<int>& counts) {
  mechanisms::MechanismSpec spec{mechanisms::Kind::kAlibi, epsilon,
                                 num_classes};
  const Vector prior =
      Vector::Constant(num_classes, Scalar(1) / Scalar(num_classes));
  Matrix targets(labels.size(), num_classes);
  for (Index i = 0; i < labels.size(); ++i) {
    const Vector noisy = mechanisms::alibi_privatize(labels[i], spec, rng);
    ++counts[i];
    targets.row(i) = mechanisms::alibi_soft_label(noisy, prior, epsilon);
  }
  return targets;
}

knn::KnnModel build_model(const TrialSpec& spec,
                          const synthetic::LabeledDataset& train, Rng& rng,
                          std::vector<int>& counts) {
  switch (spec.method) {
    case Method::kRandomizedResponse: {
      mechanisms::MechanismSpec mech{mechanisms::Kind::kRandomizedResponse,
                                     spec.epsilon, spec.num_classes};
      IntVector privatized(train.labels.size());
      for (Index i = 0; i < train.labels.size(); ++i) {
        privatized[i] = mechanisms::rr_privatize(train.labels[i], mech, rng);
        ++counts[i];
      }
      return knn::fit(train.features, privatized, spec.num_classes,
                      spec.k_neighbors);
    }
    case Method::kVectorApprox: {
      mechanisms::MechanismSpec mech{mechanisms::Kind::kVectorApprox,
                                     spec.epsilon, spec.num_classes};
      Matrix targets(train.labels.size(), spec.num_classes);
      for (Index i = 0; i < train.labels.size(); ++i) {
        targets.row(i) =
            mechanisms::vector_privatize(train.labels[i], mech, rng);
        ++counts[i];
      }
      return knn::fit(train.features, std::move(targets),
                      knn::TargetMode::kVector, spec.k_neighbors);
    }
    case Method::kAlibi: {
      Matrix targets = alibi_soft_targets(train.labels, spec.num_classes,
                                          spec.epsilon, rng, counts);
      return knn::fit(train.features, std::move(targets),
                      knn::TargetMode::kSoftLabel, spec.k_neighbors);
    }
    case Method::kLpTwoStage:
      return two_stage_lp(train.features, train.labels, spec.num_classes,
                          spec.epsilon, spec.k_neighbors, rng, &counts);
    case Method::kBayes:
      break;
  }
  throw std::invalid_argument("build_model: method has no model");
}

}  // namespace

knn::KnnModel two_stage_lp(const Eigen::Ref<const Matrix>& features,
                           const IntVector& labels, int num_classes,
                           Scalar epsilon, int k_neighbors, Rng& rng,
                           std::vector<int>* privatize_counts) {
  const Index n = features.rows();
  if (labels.size() != n) {
    throw std::invalid_argument("features and labels differ in row count");
  }
  if (n < 2 * static_cast<Index>(k_neighbors)) {
    throw std::invalid_argument(
        "two-stage split needs n >= 2k, got n = " + std::to_string(n) +
        ", k = " + std::to_string(k_neighbors));
  }
  const Index half = n / 2;

  // Stage 1: plain randomized response on the first half, scalar fit.
  mechanisms::MechanismSpec rr{mechanisms::Kind::kRandomizedResponse, epsilon,
                               num_classes};
  IntVector stage1(half);
  for (Index i = 0; i < half; ++i) {
    stage1[i] = mechanisms::rr_privatize(labels[i], rr, rng);
    if (privatize_counts) ++(*privatize_counts)[i];
  }
  const knn::KnnModel stage1_model =
      knn::fit(Matrix(features.topRows(half)), stage1, num_classes,
               k_neighbors);

  // Stage 2: the stage-1 score at each second-half point serves as that
  // point's prior for prior-restricted randomized response.
  const Index rest = n - half;
  const Matrix priors = knn::score_batch(stage1_model, features.bottomRows(rest));
  IntVector stage2(rest);
  for (Index i = 0; i < rest; ++i) {
    Vector prior = priors.row(i).transpose();
    const Scalar total = prior.sum();
    if (total > Scalar(0)) {
      prior /= total;
    } else {
      prior.setConstant(Scalar(1) / Scalar(num_classes));
    }
    stage2[i] =
        mechanisms::rrwithprior_privatize(labels[half + i], prior, epsilon, rng);
    if (privatize_counts) ++(*privatize_counts)[half + i];
  }
  return knn::fit(Matrix(features.bottomRows(rest)), stage2, num_classes,
                  k_neighbors);
}

ResultRow run_trial(const TrialSpec& spec,
                    TrialInstrumentation* instrumentation) {
  ResultRow row;
  row.method = spec.method;
  row.num_classes = spec.num_classes;
  row.sigma = spec.sigma;
  row.epsilon = spec.epsilon;
  row.k_neighbors = spec.k_neighbors;
  row.trial = spec.trial;
  row.seed =
      derive_seed(spec.master_seed, static_cast<std::uint64_t>(spec.method),
                  static_cast<std::uint64_t>(spec.num_classes),
                  static_cast<std::uint64_t>(spec.trial));
  try {
    const auto start = std::chrono::steady_clock::now();
    const synthetic::SyntheticTask task(spec.num_classes, spec.sigma);
    const std::uint64_t data_seed = derive_seed(row.seed, 1);
    const std::uint64_t test_seed = derive_seed(row.seed, 2);
    const std::uint64_t priv_seed = derive_seed(row.seed, 3);
    const synthetic::LabeledDataset test =
        synthetic::sample(task, spec.test_size, test_seed);

    IntVector predictions;
    if (spec.method == Method::kBayes) {
      predictions = synthetic::bayes_predict_batch(task, test.features);
      if (instrumentation) instrumentation->privatize_counts.clear();
    } else {
      const synthetic::LabeledDataset train =
          synthetic::sample(task, spec.n_train, data_seed);
      Rng priv_rng(priv_seed);
      std::vector<int> counts(train.labels.size(), 0);
      const knn::KnnModel model = build_model(spec, train, priv_rng, counts);
      predictions = knn::predict_batch(model, test.features);
      if (instrumentation) {
        instrumentation->privatize_counts = std::move(counts);
      }
    }

    Index correct = 0;
    for (Index i = 0; i < test.labels.size(); ++i) {
      if (predictions[i] == test.labels[i]) ++correct;
    }
    row.accuracy =
        static_cast<Scalar>(correct) / static_cast<Scalar>(test.labels.size());
    row.excess_risk =
        analysis::excess_risk_estimate(predictions, test.features, task);
    if (spec.record_timing) {
      row.wall_time_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

ExperimentResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<TrialSpec> specs;
  specs.reserve(config.class_grid.size() * config.methods.size() *
                static_cast<std::size_t>(config.trials));
  for (const int num_classes : config.class_grid) {
    for (const Method method : config.methods) {
      for (int trial = 0; trial < config.trials; ++trial) {
        TrialSpec spec;
        spec.method = method;
        spec.num_classes = num_classes;
        spec.sigma = resolve_sigma(config.sigma, num_classes);
        spec.epsilon = config.epsilon;
        spec.n_train = config.n_train;
        spec.k_neighbors = config.k_neighbors;
        spec.test_size = config.test_size;
        spec.trial = trial;
        spec.master_seed = config.master_seed;
        spec.record_timing = config.record_timing;
        specs.push_back(spec);
      }
    }
  }
  ExperimentResult result;
  result.rows.resize(specs.size());
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, config.parallelism)), specs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      result.rows[i] = run_trial(specs[i]);
    }
  } else {
    // Cells are independent (each derives its own streams), so any
    // assignment of cells to threads produces identical rows.
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&specs, &result, &cursor] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= specs.size()) return;
          result.rows[i] = run_trial(specs[i]);
        }
      });
    }
    for (std::thread& worker : pool) worker.join();
  }
  return result;
}

}  // namespace labeldp::harness
