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

#include "labeldp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "labeldp/mechanisms.hpp"

namespace labeldp::analysis {

namespace {

Scalar privatized_slope(Scalar epsilon) {
  return std::isinf(epsilon) ? Scalar(1) : std::tanh(epsilon / Scalar(4));
}

void check_positive_epsilon(Scalar epsilon) {
  if (!(epsilon > Scalar(0))) {
    throw std::domain_error("epsilon must be positive, got " +
                            std::to_string(epsilon));
  }
}

// Largest and second-largest entries of a vector with at least 2 entries.
void top_two(const Eigen::Ref<const Vector>& v, Scalar& first,
             Scalar& second) {
  if (v[0] >= v[1]) {
    first = v[0];
    second = v[1];
  } else {
    first = v[1];
    second = v[0];
  }
  for (Index i = 2; i < v.size(); ++i) {
    if (v[i] > first) {
      second = first;
      first = v[i];
    } else if (v[i] > second) {
      second = v[i];
    }
  }
}

}  // namespace

Scalar delta_epsilon(Scalar delta, Scalar epsilon) {
  check_positive_epsilon(epsilon);
  if (delta < Scalar(0)) {
    throw std::invalid_argument("delta must be nonnegative");
  }
  // (e^{eps/2} + 1) / (e^{eps/2} - 1) = 1 / tanh(eps/4).
  return delta / privatized_slope(epsilon);
}

DeltaProfile empirical_delta(const knn::KnnModel& model,
                             const synthetic::SyntheticTask& task,
                             Scalar epsilon,
                             const Eigen::Ref<const Matrix>& probes) {
  check_positive_epsilon(epsilon);
  if (model.num_classes() != task.num_classes()) {
    throw std::invalid_argument("model and task class counts differ");
  }
  if (probes.cols() != 2) {
    throw std::invalid_argument("probes must have 2 columns");
  }
  DeltaProfile profile;
  profile.epsilon = epsilon;
  profile.delta.resize(probes.rows());
  profile.gap.resize(probes.rows());
  const Matrix scores = knn::score_batch(model, probes);
  for (Index i = 0; i < probes.rows(); ++i) {
    const Vector et = synthetic::eta(task, probes.row(i).transpose());
    const Vector tilde = mechanisms::privatized_mean(et, epsilon);
    profile.delta[i] =
        (scores.row(i).transpose() - tilde).array().abs().maxCoeff();
    Scalar first, second;
    top_two(et, first, second);
    profile.gap[i] = first - second;
  }
  return profile;
}

Scalar excess_risk_estimate(const IntVector& predictions,
                            const Eigen::Ref<const Matrix>& probes,
                            const synthetic::SyntheticTask& task) {
  if (predictions.size() != probes.rows()) {
    throw std::invalid_argument("predictions and probes differ in length");
  }
  if (predictions.size() == 0) {
    throw std::invalid_argument("need at least one probe");
  }
  Scalar total = Scalar(0);
  for (Index i = 0; i < probes.rows(); ++i) {
    const int pred = predictions[i];
    if (pred < 0 || pred >= task.num_classes()) {
      throw std::invalid_argument("prediction out of range at row " +
                                  std::to_string(i));
    }
    const Vector et = synthetic::eta(task, probes.row(i).transpose());
    total += et.maxCoeff() - et[pred];
  }
  return total / static_cast<Scalar>(probes.rows());
}

Scalar excess_risk_bound(const DeltaProfile& profile) {
  check_positive_epsilon(profile.epsilon);
  if (profile.delta.size() != profile.gap.size() ||
      profile.delta.size() == 0) {
    throw std::invalid_argument("malformed delta profile");
  }
  Scalar total = Scalar(0);
  for (Index i = 0; i < profile.delta.size(); ++i) {
    const Scalar de = delta_epsilon(profile.delta[i], profile.epsilon);
    if (profile.gap[i] <= Scalar(2) * de) total += Scalar(2) * de;
  }
  return total / static_cast<Scalar>(profile.delta.size());
}

RiskReport make_risk_report(Scalar empirical_risk, Scalar bayes_risk,
                            std::optional<Scalar> bound) {
  if (!(empirical_risk >= Scalar(0)) || !(bayes_risk >= Scalar(0))) {
    throw std::invalid_argument("risks must be nonnegative");
  }
  RiskReport report;
  report.empirical_risk = empirical_risk;
  report.bayes_risk = bayes_risk;
  report.excess_risk = empirical_risk - bayes_risk;
  report.bound = bound;
  return report;
}

DeltaBound knn_delta_bound(int k, int num_classes, Scalar confidence_delta,
                           Scalar epsilon, Scalar lipschitz, Scalar r0) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (!(confidence_delta > Scalar(0) && confidence_delta < Scalar(1))) {
    throw std::invalid_argument("confidence delta must lie in (0, 1)");
  }
  if (!(epsilon > Scalar(0))) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (lipschitz < Scalar(0) || r0 < Scalar(0)) {
    throw std::invalid_argument("lipschitz and r0 must be nonnegative");
  }
  DeltaBound bound;
  const Scalar hoeffding = std::sqrt(
      std::log(Scalar(2) * Scalar(num_classes) / confidence_delta) /
      (Scalar(2) * Scalar(k)));
  bound.value = hoeffding + privatized_slope(epsilon) * lipschitz * r0;
  bound.failure_probability =
      confidence_delta +
      std::exp(-(Scalar(1) - std::log(Scalar(2))) * Scalar(k));
  return bound;
}

Scalar estimate_lipschitz(const synthetic::SyntheticTask& task, Scalar epsilon,
                          int grid_points, Scalar margin) {
  check_positive_epsilon(epsilon);
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  if (margin < Scalar(0)) throw std::invalid_argument("margin must be >= 0");
  const Scalar extent = Scalar(1) + margin * task.sigma();
  const Scalar inv_var = Scalar(1) / (task.sigma() * task.sigma());
  Scalar worst = Scalar(0);
  Vector x(2);
  for (int ix = 0; ix < grid_points; ++ix) {
    x[0] = -extent + Scalar(2) * extent * Scalar(ix) / Scalar(grid_points - 1);
    for (int iy = 0; iy < grid_points; ++iy) {
      x[1] =
          -extent + Scalar(2) * extent * Scalar(iy) / Scalar(grid_points - 1);
      const Vector et = synthetic::eta(task, x);
      // grad eta_j = eta_j (mu_j - sum_l eta_l mu_l) / sigma^2
      const RowVector mean_of_means = et.transpose() * task.means();
      const Vector norms =
          (task.means().rowwise() - mean_of_means).rowwise().norm();
      worst = std::max(worst, (et.array() * norms.array()).maxCoeff() * inv_var);
    }
  }
  return privatized_slope(epsilon) * worst;
}

Scalar estimate_r0(const synthetic::SyntheticTask& task,
                   const Eigen::Ref<const Vector>& x, int k, Index n_train,
                   Index num_draws, Rng& rng) {
  if (x.size() != 2) throw std::invalid_argument("x must have dimension 2");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n_train < 2 * static_cast<Index>(k)) {
    throw std::invalid_argument("n_train must be at least 2k");
  }
  if (num_draws < 1) throw std::invalid_argument("num_draws must be >= 1");
  const Scalar target_mass =
      Scalar(2) * Scalar(k) / static_cast<Scalar>(n_train);
  const synthetic::LabeledDataset mc =
      synthetic::sample(task, num_draws, rng.next());
  std::vector<Scalar> dists(num_draws);
  for (Index i = 0; i < num_draws; ++i) {
    dists[i] = (mc.features.row(i).transpose() - x).norm();
  }
  std::sort(dists.begin(), dists.end());
  const auto mass_below = [&dists, num_draws](Scalar r) {
    const auto it = std::upper_bound(dists.begin(), dists.end(), r);
    return static_cast<Scalar>(it - dists.begin()) /
           static_cast<Scalar>(num_draws);
  };
  Scalar lo = Scalar(0);
  Scalar hi = dists.back();
  if (mass_below(hi) < target_mass) return hi;
  while (hi - lo > Scalar(1e-4)) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (mass_below(mid) >= target_mass) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / Scalar(2);
}

}  // namespace labeldp::analysis
