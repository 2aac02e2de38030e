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

#include "labeldp/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace labeldp::synthetic {

SyntheticTask::SyntheticTask(int num_classes, Scalar sigma)
    : num_classes_(num_classes), sigma_(sigma) {
  if (num_classes < 2) {
    throw std::invalid_argument("num_classes must be >= 2, got " +
                                std::to_string(num_classes));
  }
  if (!(sigma > Scalar(0))) {
    throw std::invalid_argument("sigma must be positive, got " +
                                std::to_string(sigma));
  }
  means_.resize(num_classes, 2);
  for (int i = 0; i < num_classes; ++i) {
    const Scalar angle = Scalar(2) * Scalar(M_PI) * Scalar(i) / Scalar(num_classes);
    means_(i, 0) = std::cos(angle);
    means_(i, 1) = std::sin(angle);
  }
}

namespace {

// One draw from the mixture; shared by sample() and bayes_accuracy() so the
// two consume the stream identically.
void draw(const SyntheticTask& task, Rng& rng, int& label, Scalar& x0,
          Scalar& x1) {
  label = static_cast<int>(rng.below(task.num_classes()));
  x0 = task.means()(label, 0) + task.sigma() * rng.normal();
  x1 = task.means()(label, 1) + task.sigma() * rng.normal();
}

}  // namespace

LabeledDataset sample(const SyntheticTask& task, Index n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample size must be >= 1, got " +
                                std::to_string(n));
  }
  Rng rng(seed);
  LabeledDataset data;
  data.features.resize(n, 2);
  data.labels.resize(n);
  for (Index i = 0; i < n; ++i) {
    int label;
    Scalar x0, x1;
    draw(task, rng, label, x0, x1);
    data.labels[i] = label;
    data.features(i, 0) = x0;
    data.features(i, 1) = x1;
  }
  return data;
}

Vector eta(const SyntheticTask& task, const Eigen::Ref<const Vector>& x) {
  if (x.size() != 2) {
    throw std::invalid_argument("feature vector must have dimension 2");
  }
  const Scalar inv_two_var =
      Scalar(1) / (Scalar(2) * task.sigma() * task.sigma());
  Vector logits =
      -(task.means().rowwise() - x.transpose()).rowwise().squaredNorm() *
      inv_two_var;
  const Scalar m = logits.maxCoeff();
  Vector w = (logits.array() - m).exp();
  return w / w.sum();
}

int bayes_predict(const SyntheticTask& task,
                  const Eigen::Ref<const Vector>& x) {
  if (x.size() != 2) {
    throw std::invalid_argument("feature vector must have dimension 2");
  }
  // Equal priors and isotropic covariance make the Bayes rule the nearest
  // mean; no need to form eta.
  Vector sq =
      (task.means().rowwise() - x.transpose()).rowwise().squaredNorm();
  return static_cast<int>(argmin_lowest(sq));
}

IntVector bayes_predict_batch(const SyntheticTask& task,
                              const Eigen::Ref<const Matrix>& xs) {
  IntVector out(xs.rows());
  for (Index i = 0; i < xs.rows(); ++i) {
    out[i] = bayes_predict(task, xs.row(i).transpose());
  }
  return out;
}

Scalar bayes_accuracy(const SyntheticTask& task, Index num_draws, Rng& rng) {
  if (num_draws < 1) {
    throw std::invalid_argument("num_draws must be >= 1");
  }
  Index correct = 0;
  Vector x(2);
  for (Index i = 0; i < num_draws; ++i) {
    int label;
    Scalar x0, x1;
    draw(task, rng, label, x0, x1);
    x[0] = x0;
    x[1] = x1;
    if (bayes_predict(task, x) == label) ++correct;
  }
  return static_cast<Scalar>(correct) / static_cast<Scalar>(num_draws);
}

}  // namespace labeldp::synthetic
