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
// Excess-risk accounting for the vector mechanism: empirical score
// deviations, their debiased counterpart, the resulting pointwise excess
// risk bound, and the a-priori deviation bound for kNN scores.

#ifndef LABELDP_ANALYSIS_HPP
#define LABELDP_ANALYSIS_HPP

#include <optional>

#include "labeldp/knn.hpp"
#include "labeldp/random.hpp"
#include "labeldp/synthetic.hpp"
#include "labeldp/types.hpp"

namespace labeldp::analysis {

// Per-probe deviation of a fitted score from the privatized regression
// function, plus the top-two gap of the true regression function at the same
// probes. Produced by empirical_delta, consumed by excess_risk_bound.
struct DeltaProfile {
  Vector delta;    // max_j |g_j(x) - eta~_j(x)| per probe
  Vector gap;      // eta_(1)(x) - eta_(2)(x) per probe
  Scalar epsilon;  // privacy parameter the model was trained under
};

// Debiased deviation: delta_eps = (e^{eps/2} + 1) / (e^{eps/2} - 1) * delta.
// The factor is 1/tanh(eps/4); it tends to 1 as eps grows and diverges as
// eps -> 0. Throws std::domain_error for eps <= 0.
Scalar delta_epsilon(Scalar delta, Scalar epsilon);

// Evaluates the fitted score at each probe row and compares with the
// privatized regression function of the task.
DeltaProfile empirical_delta(const knn::KnnModel& model,
                             const synthetic::SyntheticTask& task,
                             Scalar epsilon,
                             const Eigen::Ref<const Matrix>& probes);

// Monte-Carlo excess risk of a classifier from its predictions at probe
// points: average over probes of eta_max(x) - eta_{pred(x)}(x). Nonnegative
// term by term; zero iff every prediction is Bayes-optimal at its probe.
Scalar excess_risk_estimate(const IntVector& predictions,
                            const Eigen::Ref<const Matrix>& probes,
                            const synthetic::SyntheticTask& task);

// Pointwise excess-risk bound averaged over the profile's probes:
//   2 * delta_eps(x) * 1{ gap(x) <= 2 * delta_eps(x) }.
// Dominates the realized excess risk of the argmax classifier probe by
// probe: where the gap exceeds 2*delta_eps the argmax cannot be wrong, and
// elsewhere the regret is at most the gap <= 2*delta_eps.
Scalar excess_risk_bound(const DeltaProfile& profile);

// Summary of one evaluation run; excess_risk is defined as
// empirical_risk - bayes_risk and the constructor enforces it.
struct RiskReport {
  Scalar empirical_risk = 0;
  Scalar bayes_risk = 0;
  Scalar excess_risk = 0;
  std::optional<Scalar> bound;
};

RiskReport make_risk_report(Scalar empirical_risk, Scalar bayes_risk,
                            std::optional<Scalar> bound = std::nullopt);

// A-priori bound on the score deviation of a k-NN fit on vector-privatized
// labels, holding except with the returned failure probability:
//   value = sqrt(ln(2K/delta) / (2k))
//         + (e^{eps/2}-1)/(e^{eps/2}+1) * lipschitz * r0,
//   failure_probability = delta + e^{-(1 - ln 2) k}.
// r0 is the radius within which the k nearest neighbours fall with high
// probability and lipschitz bounds the gradient of the privatized
// regression function.
struct DeltaBound {
  Scalar value = 0;
  Scalar failure_probability = 0;
};

DeltaBound knn_delta_bound(int k, int num_classes, Scalar confidence_delta,
                           Scalar epsilon, Scalar lipschitz, Scalar r0);

// Numeric estimate of the Lipschitz constant of the privatized regression
// function: grid maximum of ||grad eta~_j|| over a square covering the class
// means plus margin standard deviations on each side.
Scalar estimate_lipschitz(const synthetic::SyntheticTask& task, Scalar epsilon,
                          int grid_points = 201, Scalar margin = 3);

// Radius around x whose mixture mass is 2k/n_train, found by bisection on a
// Monte-Carlo mass estimate with num_draws samples (radius tolerance 1e-4).
Scalar estimate_r0(const synthetic::SyntheticTask& task,
                   const Eigen::Ref<const Vector>& x, int k, Index n_train,
                   Index num_draws, Rng& rng);

}  // namespace labeldp::analysis

#endif  // LABELDP_ANALYSIS_HPP
