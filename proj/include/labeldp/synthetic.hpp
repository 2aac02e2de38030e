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
// Gaussian mixture classification task in the plane: K equiprobable classes
// with means on the unit circle and isotropic covariance sigma^2 I. The
// regression function and the Bayes rule are available in closed form, which
// is what makes excess-risk bookkeeping exact.

#ifndef LABELDP_SYNTHETIC_HPP
#define LABELDP_SYNTHETIC_HPP

#include <cstdint>

#include "labeldp/random.hpp"
#include "labeldp/types.hpp"

namespace labeldp::synthetic {

class SyntheticTask {
 public:
  // Class i (0-based) has mean (cos(2*pi*i/K), sin(2*pi*i/K)).
  // Throws std::invalid_argument unless num_classes >= 2 and sigma > 0.
  SyntheticTask(int num_classes, Scalar sigma);

  int num_classes() const { return num_classes_; }
  Scalar sigma() const { return sigma_; }
  const Matrix& means() const { return means_; }  // K x 2

 private:
  int num_classes_;
  Scalar sigma_;
  Matrix means_;
};

struct LabeledDataset {
  Matrix features;   // n x 2
  IntVector labels;  // n, values in [0, K)
};

// n iid draws: label uniform on [0, K), feature = mean + sigma * N(0, I).
// Deterministic in the seed. Throws std::invalid_argument for n < 1.
LabeledDataset sample(const SyntheticTask& task, Index n, std::uint64_t seed);

// Posterior class probabilities eta_j(x) = P(Y = j | X = x), computed as a
// softmax of -||x - mu_j||^2 / (2 sigma^2) with max subtraction.
Vector eta(const SyntheticTask& task, const Eigen::Ref<const Vector>& x);

// Bayes-optimal prediction: the nearest class mean, equivalently
// argmax_j eta_j(x). Ties resolve to the lowest class index.
int bayes_predict(const SyntheticTask& task, const Eigen::Ref<const Vector>& x);
IntVector bayes_predict_batch(const SyntheticTask& task,
                              const Eigen::Ref<const Matrix>& xs);

// Monte-Carlo estimate of the Bayes accuracy from num_draws fresh samples.
// For K = 2 this converges to Phi(1/sigma).
Scalar bayes_accuracy(const SyntheticTask& task, Index num_draws, Rng& rng);

}  // namespace labeldp::synthetic

#endif  // LABELDP_SYNTHETIC_HPP
