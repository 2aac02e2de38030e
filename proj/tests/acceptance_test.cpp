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
// Acceptance gate for the library: nine end-to-end checks covering the
// privacy guarantee, benchmark-scale utility claims, the excess-risk
// machinery, and reproducibility. Each criterion prints exactly one
// PASS/FAIL line with its measured numbers; the process exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "labeldp/analysis.hpp"
#include "labeldp/harness.hpp"
#include "labeldp/knn.hpp"
#include "labeldp/mechanisms.hpp"
#include "labeldp/random.hpp"
#include "labeldp/synthetic.hpp"
#include "labeldp/types.hpp"

namespace {

using labeldp::derive_seed;
using labeldp::Index;
using labeldp::IntVector;
using labeldp::kInfiniteEpsilon;
using labeldp::Matrix;
using labeldp::Rng;
using labeldp::Scalar;
using labeldp::Vector;
namespace analysis = labeldp::analysis;
namespace harness = labeldp::harness;
namespace knn = labeldp::knn;
namespace mechanisms = labeldp::mechanisms;
namespace synthetic = labeldp::synthetic;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

struct Stats {
  Scalar mean = 0;
  Scalar se = 0;
  int n = 0;
};

Stats accuracy_stats(const std::vector<harness::ResultRow>& rows,
                     harness::Method method, int num_classes) {
  Stats stats;
  Scalar sum = 0;
  for (const harness::ResultRow& row : rows) {
    if (row.method != method || row.num_classes != num_classes ||
        !row.error.empty()) {
      continue;
    }
    sum += row.accuracy;
    ++stats.n;
  }
  stats.mean = sum / stats.n;
  Scalar ss = 0;
  for (const harness::ResultRow& row : rows) {
    if (row.method != method || row.num_classes != num_classes ||
        !row.error.empty()) {
      continue;
    }
    ss += (row.accuracy - stats.mean) * (row.accuracy - stats.mean);
  }
  stats.se = std::sqrt(ss / (stats.n - 1) / stats.n);
  return stats;
}

bool all_rows_clean(const std::vector<harness::ResultRow>& rows,
                    std::string& first_error) {
  for (const harness::ResultRow& row : rows) {
    if (!row.error.empty()) {
      first_error = std::string(harness::method_name(row.method)) + " K=" +
                    std::to_string(row.num_classes) + ": " + row.error;
      return false;
    }
  }
  return true;
}

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
}

std::string format_number(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(v));
  return buf;
}

// 1. Exhaustive privacy verification of the vector mechanism: the largest
// likelihood ratio over all output vectors and label pairs must equal e^eps
// (within 1e-9 relative) for K = 2..10 and eps in {0.5, 1, 2}, in under a
// second.
bool criterion1() {
  Timer timer;
  Scalar worst_excess = 0;   // by how much the ratio overshoots e^eps
  Scalar worst_equality = 0; // how far the attained maximum is below e^eps
  for (int num_classes = 2; num_classes <= 10; ++num_classes) {
    for (const Scalar eps : {0.5, 1.0, 2.0}) {
      mechanisms::MechanismSpec spec{mechanisms::Kind::kVectorApprox, eps,
                                     num_classes};
      const Scalar realized = mechanisms::verify_label_dp(spec);
      const Scalar ratio = std::exp(realized);
      const Scalar budget = std::exp(eps);
      worst_excess = std::max(worst_excess, (ratio - budget) / budget);
      worst_equality = std::max(worst_equality, (budget - ratio) / budget);
    }
  }
  const double elapsed = timer.seconds();
  const bool pass =
      worst_excess <= 1e-9 && worst_equality <= 1e-9 && elapsed < 1.0;
  report(1, pass,
         "exhaustive likelihood ratios for K=2..10, eps in {0.5,1,2}: "
         "overshoot " +
             format_number(worst_excess) + ", equality gap " +
             format_number(worst_equality) + " (budget 1e-9), elapsed " +
             format_number(elapsed) + " s (budget 1 s)");
  return pass;
}

// 2. Stability of the vector method when sigma tracks 2/K: mean accuracy
// moves at most 5 points across K in {10,20,50,100} and beats plain RR by
// at least 5 points at K in {50, 100}. Sweep budget 30 minutes.
bool criterion2() {
  Timer timer;
  harness::ExperimentConfig config;
  config.class_grid = {10, 20, 50, 100};
  config.sigma.two_over_k = true;
  config.methods = {harness::Method::kRandomizedResponse,
                    harness::Method::kVectorApprox};
  config.epsilon = 1.0;
  config.k_neighbors = 200;
  config.n_train = 10000;
  config.trials = 50;
  config.test_size = 2000;
  config.master_seed = 1;
  const harness::ExperimentResult result = harness::run_sweep(config);
  std::string error;
  if (!all_rows_clean(result.rows, error)) {
    report(2, false, "sweep reported a failed cell: " + error);
    return false;
  }
  Scalar lo = 1;
  Scalar hi = 0;
  std::string per_k;
  for (const int num_classes : config.class_grid) {
    const Stats vec = accuracy_stats(
        result.rows, harness::Method::kVectorApprox, num_classes);
    lo = std::min(lo, vec.mean);
    hi = std::max(hi, vec.mean);
    if (!per_k.empty()) per_k += "/";
    per_k += format_number(vec.mean);
  }
  const Scalar spread = hi - lo;
  Scalar min_lead = 1;
  for (const int num_classes : {50, 100}) {
    const Stats vec = accuracy_stats(
        result.rows, harness::Method::kVectorApprox, num_classes);
    const Stats rr = accuracy_stats(
        result.rows, harness::Method::kRandomizedResponse, num_classes);
    min_lead = std::min(min_lead, vec.mean - rr.mean);
  }
  const double elapsed = timer.seconds();
  const bool pass = spread <= 0.05 && min_lead >= 0.05 && elapsed < 1800.0;
  report(2, pass,
         "sigma=2/K stability: vector means at K=10/20/50/100 are " + per_k +
             ", spread " + format_number(spread) +
             " (budget 0.05), min lead over rr at K in {50,100} " +
             format_number(min_lead) + " (needs >= 0.05), elapsed " +
             format_number(elapsed) + " s (budget 1800 s)");
  return pass;
}

// 3. Crossover at fixed sigma = 0.05: the four private methods are
// pairwise within 2 combined standard errors at K = 10, and the vector
// method's mean strictly leads every scalar baseline at K = 100.
bool criterion3() {
  Timer timer;
  harness::ExperimentConfig config;
  config.class_grid = {10, 20, 50, 100};
  config.sigma.two_over_k = false;
  config.sigma.value = 0.05;
  config.epsilon = 1.0;
  config.k_neighbors = 200;
  config.n_train = 10000;
  config.trials = 50;
  config.test_size = 2000;
  config.master_seed = 1;
  const harness::ExperimentResult result = harness::run_sweep(config);
  std::string error;
  if (!all_rows_clean(result.rows, error)) {
    report(3, false, "sweep reported a failed cell: " + error);
    return false;
  }
  const std::vector<harness::Method> private_methods = {
      harness::Method::kRandomizedResponse, harness::Method::kLpTwoStage,
      harness::Method::kAlibi, harness::Method::kVectorApprox};
  Scalar worst_z = 0;
  std::string worst_pair;
  for (std::size_t a = 0; a < private_methods.size(); ++a) {
    for (std::size_t b = a + 1; b < private_methods.size(); ++b) {
      const Stats sa = accuracy_stats(result.rows, private_methods[a], 10);
      const Stats sb = accuracy_stats(result.rows, private_methods[b], 10);
      const Scalar z = std::abs(sa.mean - sb.mean) /
                       std::sqrt(sa.se * sa.se + sb.se * sb.se);
      if (z > worst_z) {
        worst_z = z;
        worst_pair = std::string(harness::method_name(private_methods[a])) +
                     " (" + format_number(sa.mean) + ") / " +
                     std::string(harness::method_name(private_methods[b])) +
                     " (" + format_number(sb.mean) + ")";
      }
    }
  }
  const Stats vec100 =
      accuracy_stats(result.rows, harness::Method::kVectorApprox, 100);
  Scalar min_lead = 1;
  std::string trailing;
  for (const harness::Method baseline :
       {harness::Method::kRandomizedResponse, harness::Method::kLpTwoStage,
        harness::Method::kAlibi}) {
    const Stats stats = accuracy_stats(result.rows, baseline, 100);
    if (vec100.mean - stats.mean < min_lead) {
      min_lead = vec100.mean - stats.mean;
      trailing = harness::method_name(baseline);
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = worst_z <= 2.0 && min_lead > 0.0;
  report(3, pass,
         "sigma=0.05 crossover: worst private-method pair at K=10 is " +
             worst_pair + " with z " + format_number(worst_z) +
             " (budget 2), vector lead over " + trailing + " at K=100 " +
             format_number(min_lead) + " (needs > 0), elapsed " +
             format_number(elapsed) + " s");
  return pass;
}

// 4. The executable excess-risk bound dominates the realized excess risk in
// each of 20 trials at K = 10, sigma = 2/K, eps = 1, k = 200, N = 10000,
// with 10^4 fresh probes per trial, allowing 3 combined standard errors.
bool criterion4() {
  Timer timer;
  const int num_classes = 10;
  const Scalar sigma = 0.2;
  const Scalar eps = 1.0;
  const Index n_train = 10000;
  const int k_neighbors = 200;
  const Index num_probes = 10000;
  const synthetic::SyntheticTask task(num_classes, sigma);
  bool pass = true;
  Scalar worst_margin = 1e30;  // bound + slack - estimate, minimized
  int worst_trial = -1;
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t seed = derive_seed(4001, trial);
    const synthetic::LabeledDataset train =
        synthetic::sample(task, n_train, derive_seed(seed, 1));
    Rng priv(derive_seed(seed, 2));
    mechanisms::MechanismSpec spec{mechanisms::Kind::kVectorApprox, eps,
                                   num_classes};
    Matrix targets(n_train, num_classes);
    for (Index i = 0; i < n_train; ++i) {
      targets.row(i) =
          mechanisms::vector_privatize(train.labels[i], spec, priv)
              .transpose();
    }
    const knn::KnnModel model = knn::fit(
        train.features, std::move(targets), knn::TargetMode::kVector,
        k_neighbors);
    const Matrix probes =
        synthetic::sample(task, num_probes, derive_seed(seed, 3)).features;
    const IntVector preds = knn::predict_batch(model, probes);
    const Scalar estimate =
        analysis::excess_risk_estimate(preds, probes, task);
    const analysis::DeltaProfile profile =
        analysis::empirical_delta(model, task, eps, probes);
    const Scalar bound = analysis::excess_risk_bound(profile);

    // Per-probe terms of both estimators, for the combined standard error.
    Scalar est_sq = 0;
    Scalar bound_sq = 0;
    for (Index i = 0; i < num_probes; ++i) {
      const Vector et = synthetic::eta(task, probes.row(i).transpose());
      const Scalar regret = et.maxCoeff() - et[preds[i]];
      est_sq += regret * regret;
      const Scalar amplified = analysis::delta_epsilon(profile.delta[i], eps);
      const Scalar term =
          profile.gap[i] <= 2 * amplified ? 2 * amplified : Scalar(0);
      bound_sq += term * term;
    }
    const Scalar se_est =
        std::sqrt((est_sq / num_probes - estimate * estimate) / num_probes);
    const Scalar se_bound =
        std::sqrt((bound_sq / num_probes - bound * bound) / num_probes);
    const Scalar slack =
        3 * std::sqrt(se_est * se_est + se_bound * se_bound);
    const Scalar margin = bound + slack - estimate;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_trial = trial;
    }
    if (estimate > bound + slack) pass = false;
  }
  report(4, pass,
         "excess-risk bound dominates the estimate in all 20 trials; worst "
         "margin " +
             format_number(worst_margin) + " at trial " +
             std::to_string(worst_trial) + ", elapsed " +
             format_number(timer.seconds()) + " s");
  return pass;
}

// 5. The probe-averaged regret and the accuracy-difference estimator of the
// excess risk agree within 3 combined standard errors on 10^5 probes.
bool criterion5() {
  Timer timer;
  const int num_classes = 10;
  const synthetic::SyntheticTask task(num_classes, 0.2);
  const std::uint64_t seed = 5001;
  const synthetic::LabeledDataset train =
      synthetic::sample(task, 2000, derive_seed(seed, 1));
  Rng priv(derive_seed(seed, 2));
  mechanisms::MechanismSpec spec{mechanisms::Kind::kVectorApprox, 1.0,
                                 num_classes};
  Matrix targets(2000, num_classes);
  for (Index i = 0; i < 2000; ++i) {
    targets.row(i) =
        mechanisms::vector_privatize(train.labels[i], spec, priv).transpose();
  }
  const knn::KnnModel model = knn::fit(
      train.features, std::move(targets), knn::TargetMode::kVector, 50);
  const Index m = 100000;
  const synthetic::LabeledDataset probe =
      synthetic::sample(task, m, derive_seed(seed, 3));
  const IntVector preds = knn::predict_batch(model, probe.features);
  const IntVector bayes =
      synthetic::bayes_predict_batch(task, probe.features);
  const Scalar regret_mean =
      analysis::excess_risk_estimate(preds, probe.features, task);
  Scalar regret_sq = 0;
  Scalar diff_mean = 0;
  Scalar diff_sq = 0;
  for (Index i = 0; i < m; ++i) {
    const Vector et = synthetic::eta(task, probe.features.row(i).transpose());
    const Scalar r = et.maxCoeff() - et[preds[i]];
    regret_sq += r * r;
    const Scalar d = (bayes[i] == probe.labels[i] ? 1.0 : 0.0) -
                     (preds[i] == probe.labels[i] ? 1.0 : 0.0);
    diff_mean += d;
    diff_sq += d * d;
  }
  diff_mean /= m;
  const Scalar se_regret =
      std::sqrt((regret_sq / m - regret_mean * regret_mean) / m);
  const Scalar se_diff =
      std::sqrt((diff_sq / m - diff_mean * diff_mean) / m);
  const Scalar tol =
      3 * std::sqrt(se_regret * se_regret + se_diff * se_diff);
  const Scalar gap = std::abs(regret_mean - diff_mean);
  const bool pass = gap <= tol;
  report(5, pass,
         "excess-risk estimators on 1e5 probes: regret average " +
             format_number(regret_mean) + ", accuracy difference " +
             format_number(diff_mean) + ", |gap| " + format_number(gap) +
             " vs 3-SE budget " + format_number(tol) + ", elapsed " +
             format_number(timer.seconds()) + " s");
  return pass;
}

// 6. Round-trip: the forward score map followed by debias reproduces any
// probability vector to 1e-12, and debias never changes an argmax (with
// ties included) across 10^4 random score vectors.
bool criterion6() {
  Timer timer;
  Rng rng(6001);
  Scalar worst = 0;
  for (const int num_classes : {2, 3, 10, 64}) {
    for (const Scalar eps : {0.1, 1.0, 2.0, 10.0}) {
      for (int rep = 0; rep < 100; ++rep) {
        Vector eta(num_classes);
        for (int j = 0; j < num_classes; ++j) eta[j] = rng.uniform() + 1e-6;
        eta /= eta.sum();
        const Vector back =
            knn::debias(mechanisms::privatized_mean(eta, eps), eps);
        worst = std::max(worst, (back - eta).cwiseAbs().maxCoeff());
      }
    }
  }
  int violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    Vector s(8);
    if (rep % 2 == 0) {
      for (int j = 0; j < 8; ++j) s[j] = rng.uniform();
    } else {
      for (int j = 0; j < 8; ++j) s[j] = 0.25 * rng.below(5);
    }
    if (labeldp::argmax_lowest(knn::debias(s, 1.0)) !=
        labeldp::argmax_lowest(s)) {
      ++violations;
    }
  }
  const bool pass = worst <= 1e-12 && violations == 0;
  report(6, pass,
         "round-trip worst error " + format_number(worst) +
             " (budget 1e-12), argmax violations " +
             std::to_string(violations) + "/10000 (budget 0), elapsed " +
             format_number(timer.seconds()) + " s");
  return pass;
}

// 7. Closed-form deviation bound growth in K: with the geometry term zeroed,
// k = 200 and delta = 0.05 must give 0.12239 at K = 10 (tolerance 1e-4) and
// stay at or below 0.1592 at K = 1000.
bool criterion7() {
  const Scalar at_10 =
      analysis::knn_delta_bound(200, 10, 0.05, 1.0, 0.0, 0.0).value;
  const Scalar at_1000 =
      analysis::knn_delta_bound(200, 1000, 0.05, 1.0, 0.0, 0.0).value;
  const bool first = std::abs(at_10 - 0.12239) <= 1e-4;
  const bool second = at_1000 <= 0.1592 + 1e-4;
  const bool pass = first && second;
  report(7, pass,
         "deviation bound, geometry term zeroed: K=10 gives " +
             format_number(at_10) + " (target 0.12239 +- 1e-4, " +
             (first ? "ok" : "off") + "), K=1000 gives " +
             format_number(at_1000) + " (target <= 0.1592, " +
             (second ? "ok" : "exceeds") + ")");
  return pass;
}

// 8. With privacy off (eps = infinity) the kNN pipeline lands within 2
// points of the Bayes oracle's mean accuracy over 20 trials.
bool criterion8() {
  Timer timer;
  auto make_spec = [](harness::Method method, int trial) {
    harness::TrialSpec spec;
    spec.method = method;
    spec.num_classes = 10;
    spec.sigma = 0.05;
    spec.epsilon = kInfiniteEpsilon;
    spec.n_train = 10000;
    spec.k_neighbors = 200;
    spec.test_size = 2000;
    spec.trial = trial;
    spec.master_seed = 1;
    return spec;
  };
  Scalar knn_sum = 0;
  Scalar bayes_sum = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const harness::ResultRow knn_row =
        harness::run_trial(make_spec(harness::Method::kVectorApprox, trial));
    const harness::ResultRow bayes_row =
        harness::run_trial(make_spec(harness::Method::kBayes, trial));
    if (!knn_row.error.empty() || !bayes_row.error.empty()) {
      report(8, false, "trial failed: " + knn_row.error + bayes_row.error);
      return false;
    }
    knn_sum += knn_row.accuracy;
    bayes_sum += bayes_row.accuracy;
  }
  const Scalar knn_mean = knn_sum / 20;
  const Scalar bayes_mean = bayes_sum / 20;
  const Scalar gap = std::abs(bayes_mean - knn_mean);
  const bool pass = gap <= 0.02;
  report(8, pass,
         "eps=inf consistency: kNN mean accuracy " + format_number(knn_mean) +
             " vs Bayes oracle " + format_number(bayes_mean) + ", |gap| " +
             format_number(gap) + " (budget 0.02), elapsed " +
             format_number(timer.seconds()) + " s");
  return pass;
}

// 9. Reproducibility: the same sweep run sequentially and with parallelism 8
// serializes to byte-identical CSV.
bool criterion9() {
  Timer timer;
  harness::ExperimentConfig config;
  config.class_grid = {2, 5, 10};
  config.sigma.value = 0.2;
  config.n_train = 1000;
  config.k_neighbors = 50;
  config.trials = 3;
  config.test_size = 500;
  config.master_seed = 99;
  std::ostringstream sequential;
  harness::write_csv(harness::run_sweep(config), sequential);
  config.parallelism = 8;
  std::ostringstream parallel;
  harness::write_csv(harness::run_sweep(config), parallel);
  const bool pass =
      sequential.str() == parallel.str() && !sequential.str().empty();
  report(9, pass,
         std::string("sequential and parallelism-8 sweeps ") +
             (pass ? "are byte-identical" : "DIFFER") + " (" +
             std::to_string(sequential.str().size()) + " bytes of CSV), "
             "elapsed " +
             format_number(timer.seconds()) + " s");
  return pass;
}

}  // namespace

int main() {
  int failures = 0;
  failures += criterion1() ? 0 : 1;
  failures += criterion2() ? 0 : 1;
  failures += criterion3() ? 0 : 1;
  failures += criterion4() ? 0 : 1;
  failures += criterion5() ? 0 : 1;
  failures += criterion6() ? 0 : 1;
  failures += criterion7() ? 0 : 1;
  failures += criterion8() ? 0 : 1;
  failures += criterion9() ? 0 : 1;
  if (failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
  } else {
    std::printf("acceptance: %d of 9 criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
