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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "labeldp/analysis.hpp"
#include "labeldp/harness.hpp"
#include "labeldp/mechanisms.hpp"
#include "labeldp/synthetic.hpp"

namespace {

using labeldp::Index;
using labeldp::IntVector;
using labeldp::Matrix;
using labeldp::Rng;
using labeldp::Scalar;
using labeldp::Vector;
namespace analysis = labeldp::analysis;
namespace harness = labeldp::harness;
namespace knn = labeldp::knn;
namespace mechanisms = labeldp::mechanisms;
namespace synthetic = labeldp::synthetic;

// The run subcommand accepts every config key as a flag of the same name;
// values are kept as strings and funneled through the config parser so the
// file and the command line cannot drift apart.
struct RunOverrides {
  std::map<std::string, std::string> values;
};

void add_run_flags(CLI::App& cmd, RunOverrides& overrides) {
  static const std::vector<std::pair<std::string, std::string>> kKeys = {
      {"classes", "comma-separated K grid"},
      {"sigma", "noise level, a number or 2/K"},
      {"n", "training set size"},
      {"methods", "comma-separated subset of bayes,rr,lp-2st,alibi,vector"},
      {"epsilon", "privacy budget, a number or inf"},
      {"k", "neighbour count"},
      {"trials", "trials per cell"},
      {"test_size", "fresh test points per trial"},
      {"seed", "master seed"},
      {"out", "output directory"},
      {"format", "csv, plot or both"},
      {"parallelism", "worker threads"},
      {"timing", "none (deterministic output) or wall"},
  };
  for (const auto& [key, help] : kKeys) {
    cmd.add_option_function<std::string>(
        "--" + key,
        [&overrides, key = key](const std::string& value) {
          overrides.values[key] = value;
        },
        help);
  }
}

int run_command(const std::string& config_path, const RunOverrides& overrides) {
  harness::ExperimentConfig config;
  if (!config_path.empty()) {
    config = harness::load_config(config_path);
  }
  for (const auto& [key, value] : overrides.values) {
    harness::apply_key(config, key, value);
  }
  config.validate();

  const harness::ExperimentResult result = harness::run_sweep(config);

  int failures = 0;
  for (const harness::ResultRow& row : result.rows) {
    if (!row.error.empty()) {
      ++failures;
      std::cerr << "cell method=" << harness::method_name(row.method)
                << " K=" << row.num_classes << " trial=" << row.trial
                << " failed: " << row.error << "\n";
    }
  }

  std::filesystem::create_directories(config.out_dir);
  if (config.format == "csv" || config.format == "both") {
    const std::string path = config.out_dir + "/results.csv";
    harness::write_csv_file(result, path);
    std::cout << "wrote " << path << "\n";
  }
  if (config.format == "plot" || config.format == "both") {
    const std::string path = config.out_dir + "/accuracy.svg";
    harness::write_plot_file(result, path);
    std::cout << "wrote " << path << "\n";
  }

  // Per-cell summary: mean accuracy and its standard error over trials.
  std::map<std::pair<int, int>, std::vector<Scalar>> cells;
  for (const harness::ResultRow& row : result.rows) {
    if (row.error.empty()) {
      cells[{static_cast<int>(row.method), row.num_classes}].push_back(
          row.accuracy);
    }
  }
  for (const auto& [key, accs] : cells) {
    Scalar mean = 0;
    for (const Scalar a : accs) mean += a;
    mean /= static_cast<Scalar>(accs.size());
    Scalar var = 0;
    for (const Scalar a : accs) var += (a - mean) * (a - mean);
    const Scalar se =
        accs.size() > 1
            ? std::sqrt(var / static_cast<Scalar>(accs.size() - 1) /
                        static_cast<Scalar>(accs.size()))
            : Scalar(0);
    std::cout << "method=" << harness::method_name(
                     static_cast<harness::Method>(key.first))
              << " K=" << key.second << " mean_accuracy=" << mean
              << " se=" << se << " trials=" << accs.size() << "\n";
  }
  return failures == 0 ? 0 : 1;
}

int verify_dp_command(const std::string& mechanism,
                      const std::vector<int>& classes,
                      const std::vector<Scalar>& epsilons) {
  bool all_ok = true;
  const Scalar tolerance = 1e-9;
  for (const Scalar epsilon : epsilons) {
    for (const int num_classes : classes) {
      std::vector<std::pair<std::string, Scalar>> losses;
      if (mechanism == "rr" || mechanism == "all") {
        losses.emplace_back(
            "rr", mechanisms::verify_label_dp(
                      {mechanisms::Kind::kRandomizedResponse, epsilon,
                       num_classes}));
      }
      if (mechanism == "vector" || mechanism == "all") {
        losses.emplace_back(
            "vector", mechanisms::verify_label_dp(
                          {mechanisms::Kind::kVectorApprox, epsilon,
                           num_classes}));
      }
      if (mechanism == "rrwithprior" || mechanism == "all") {
        const Vector prior =
            Vector::Constant(num_classes, Scalar(1) / Scalar(num_classes));
        losses.emplace_back(
            "rrwithprior",
            mechanisms::verify_label_dp(
                {mechanisms::Kind::kRRWithPrior, epsilon, num_classes},
                prior));
      }
      if (mechanism == "alibi" || mechanism == "all") {
        losses.emplace_back(
            "alibi", mechanisms::verify_label_dp(
                         {mechanisms::Kind::kAlibi, epsilon, num_classes}));
      }
      for (const auto& [name, loss] : losses) {
        const bool ok = std::exp(loss) <= std::exp(epsilon) * (1 + tolerance);
        all_ok = all_ok && ok;
        std::cout << "mechanism=" << name << " K=" << num_classes
                  << " epsilon=" << epsilon << " max_ratio=" << std::exp(loss)
                  << " budget=" << std::exp(epsilon)
                  << (ok ? " ok" : " VIOLATION") << "\n";
      }
    }
  }
  return all_ok ? 0 : 1;
}

int bounds_command(int num_classes, const std::string& sigma_text,
                   Scalar epsilon, int k_neighbors, Index n_train, int trials,
                   Index probes, Scalar confidence_delta,
                   const std::string& lipschitz_text,
                   const std::string& r0_text, std::uint64_t seed) {
  harness::SigmaRule rule;
  if (sigma_text == "2/K" || sigma_text == "2/k") {
    rule.two_over_k = true;
  } else {
    rule.value = std::stod(sigma_text);
  }
  const Scalar sigma = harness::resolve_sigma(rule, num_classes);
  const synthetic::SyntheticTask task(num_classes, sigma);

  // Shared probe set across trials, drawn from the mixture.
  const synthetic::LabeledDataset probe_set =
      synthetic::sample(task, probes, labeldp::derive_seed(seed, 101));

  int held = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = labeldp::derive_seed(seed, 1, trial);
    const synthetic::LabeledDataset train =
        synthetic::sample(task, n_train, labeldp::derive_seed(trial_seed, 1));
    Rng priv_rng(labeldp::derive_seed(trial_seed, 2));
    const mechanisms::MechanismSpec mech{mechanisms::Kind::kVectorApprox,
                                         epsilon, num_classes};
    Matrix targets(n_train, num_classes);
    for (Index i = 0; i < n_train; ++i) {
      targets.row(i) =
          mechanisms::vector_privatize(train.labels[i], mech, priv_rng);
    }
    const knn::KnnModel model = knn::fit(train.features, std::move(targets),
                                         knn::TargetMode::kVector, k_neighbors);
    const analysis::DeltaProfile profile =
        analysis::empirical_delta(model, task, epsilon, probe_set.features);
    const Scalar bound = analysis::excess_risk_bound(profile);
    const IntVector predictions = knn::predict_batch(model, probe_set.features);
    const Scalar excess = analysis::excess_risk_estimate(
        predictions, probe_set.features, task);
    const bool ok = excess <= bound;
    held += ok ? 1 : 0;
    std::cout << "trial " << trial << ": excess_risk=" << excess
              << " excess_bound=" << bound << (ok ? " holds" : " VIOLATED")
              << "\n";
  }
  std::cout << held << "/" << trials << " trials within the excess bound\n";

  Scalar lipschitz;
  if (lipschitz_text == "auto") {
    lipschitz = analysis::estimate_lipschitz(task, epsilon);
    std::cout << "estimated lipschitz constant: " << lipschitz << "\n";
  } else {
    lipschitz = std::stod(lipschitz_text);
  }
  Scalar r0;
  if (r0_text == "auto") {
    Rng r0_rng(labeldp::derive_seed(seed, 7));
    r0 = analysis::estimate_r0(task, task.means().row(0).transpose(),
                               k_neighbors, n_train, 100000, r0_rng);
    std::cout << "estimated r0 at the first class mean: " << r0 << "\n";
  } else {
    r0 = std::stod(r0_text);
  }
  const analysis::DeltaBound db = analysis::knn_delta_bound(
      k_neighbors, num_classes, confidence_delta, epsilon, lipschitz, r0);
  std::cout << "knn delta bound: value=" << db.value
            << " failure_probability=" << db.failure_probability << "\n";
  return held == trials ? 0 : 1;
}

int plot_command(const std::string& input, const std::string& output) {
  const harness::ExperimentResult result = harness::read_csv_file(input);
  harness::write_plot_file(result, output);
  std::cout << "wrote " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"label-DP benchmark harness"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  RunOverrides overrides;
  CLI::App* run = app.add_subcommand("run", "run an experiment sweep");
  run->add_option("--config", config_path, "key=value config file");
  add_run_flags(*run, overrides);

  // verify-dp
  std::string mechanism = "all";
  std::vector<int> classes{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Scalar> epsilons{0.5, 1, 2};
  CLI::App* verify = app.add_subcommand(
      "verify-dp", "check the privacy guarantee by enumeration");
  verify->add_option("--mechanism", mechanism,
                     "rr, vector, rrwithprior, alibi or all");
  verify->add_option("--classes", classes, "class counts to check")
      ->delimiter(',');
  verify->add_option("--epsilon", epsilons, "privacy budgets to check")
      ->delimiter(',');

  // bounds
  int bounds_classes = 10;
  std::string bounds_sigma = "2/K";
  Scalar bounds_epsilon = 1;
  int bounds_k = 200;
  Index bounds_n = 10000;
  int bounds_trials = 20;
  Index bounds_probes = 10000;
  Scalar bounds_delta = 0.05;
  std::string bounds_lipschitz = "auto";
  std::string bounds_r0 = "auto";
  std::uint64_t bounds_seed = 1;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "check the excess-risk bound and report the delta bound");
  bounds->add_option("--classes", bounds_classes, "class count");
  bounds->add_option("--sigma", bounds_sigma, "noise level, a number or 2/K");
  bounds->add_option("--epsilon", bounds_epsilon, "privacy budget");
  bounds->add_option("--k", bounds_k, "neighbour count");
  bounds->add_option("--n", bounds_n, "training set size");
  bounds->add_option("--trials", bounds_trials, "number of trials");
  bounds->add_option("--probes", bounds_probes, "probe points");
  bounds->add_option("--delta", bounds_delta,
                     "confidence parameter of the delta bound");
  bounds->add_option("--lipschitz", bounds_lipschitz,
                     "lipschitz constant, a number or auto");
  bounds->add_option("--r0", bounds_r0, "neighbour radius, a number or auto");
  bounds->add_option("--seed", bounds_seed, "master seed");

  // plot
  std::string plot_input;
  std::string plot_output = "accuracy.svg";
  CLI::App* plot =
      app.add_subcommand("plot", "render an accuracy plot from a results CSV");
  plot->add_option("--input", plot_input, "results CSV path")->required();
  plot->add_option("--out", plot_output, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, overrides);
    if (verify->parsed()) return verify_dp_command(mechanism, classes, epsilons);
    if (bounds->parsed()) {
      return bounds_command(bounds_classes, bounds_sigma, bounds_epsilon,
                            bounds_k, bounds_n, bounds_trials, bounds_probes,
                            bounds_delta, bounds_lipschitz, bounds_r0,
                            bounds_seed);
    }
    if (plot->parsed()) return plot_command(plot_input, plot_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
