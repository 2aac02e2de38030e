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

#include "labeldp/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace labeldp::knn {

namespace {

void validate_targets(const Matrix& targets, TargetMode mode) {
  switch (mode) {
    case TargetMode::kVector:
      if (!((targets.array() == Scalar(0)) || (targets.array() == Scalar(1)))
               .all()) {
        throw std::invalid_argument(
            "kVector targets must have entries exactly 0 or 1");
      }
      break;
    case TargetMode::kScalar:
    case TargetMode::kSoftLabel:
      if (((targets.array() < Scalar(0)) || (targets.array() > Scalar(1)))
              .any()) {
        throw std::invalid_argument("target entries must lie in [0, 1]");
      }
      for (Index i = 0; i < targets.rows(); ++i) {
        if (std::abs(targets.row(i).sum() - Scalar(1)) > Scalar(1e-9)) {
          throw std::invalid_argument("target row " + std::to_string(i) +
                                      " does not sum to 1");
        }
      }
      break;
  }
}

// Scratch buffers reused across queries of one batch.
struct Workspace {
  Vector dists;
  std::vector<Index> order;
};

void k_nearest(const KnnModel& model, const Eigen::Ref<const Vector>& x,
               Workspace& ws, std::vector<Index>& out) {
  if (x.size() != model.features().cols()) {
    throw std::invalid_argument("query dimension " + std::to_string(x.size()) +
                                " does not match training dimension " +
                                std::to_string(model.features().cols()));
  }
  const Index n = model.num_samples();
  ws.dists = (model.features().rowwise() - x.transpose()).rowwise().squaredNorm();
  ws.order.resize(n);
  std::iota(ws.order.begin(), ws.order.end(), Index(0));
  const auto closer = [&ws](Index a, Index b) {
    if (ws.dists[a] != ws.dists[b]) return ws.dists[a] < ws.dists[b];
    return a < b;  // distance ties go to the lower sample index
  };
  const Index k = model.k();
  if (k < n) {
    std::nth_element(ws.order.begin(), ws.order.begin() + k, ws.order.end(),
                     closer);
  }
  out.assign(ws.order.begin(), ws.order.begin() + k);
  // Canonical ascending order so downstream accumulation is reproducible
  // regardless of how nth_element arranged the front block.
  std::sort(out.begin(), out.end());
}

void score_into(const KnnModel& model, const std::vector<Index>& nearest,
                Vector& out) {
  out.setZero(model.num_classes());
  for (const Index i : nearest) out += model.targets().row(i);
  out /= static_cast<Scalar>(nearest.size());
}

}  // namespace

KnnModel fit(Matrix features, Matrix targets, TargetMode mode, int k) {
  if (features.rows() != targets.rows()) {
    throw std::invalid_argument("features and targets differ in row count");
  }
  if (features.rows() < 1) {
    throw std::invalid_argument("training set must be non-empty");
  }
  if (features.cols() < 1) {
    throw std::invalid_argument("features must have at least one column");
  }
  if (targets.cols() < 2) {
    throw std::invalid_argument("targets must have at least 2 columns");
  }
  if (k < 1 || k > features.rows()) {
    throw std::invalid_argument("k = " + std::to_string(k) +
                                " outside [1, N = " +
                                std::to_string(features.rows()) + "]");
  }
  validate_targets(targets, mode);
  KnnModel model;
  model.features_ = std::move(features);
  model.targets_ = std::move(targets);
  model.mode_ = mode;
  model.k_ = k;
  return model;
}

KnnModel fit(Matrix features, const IntVector& labels, int num_classes,
             int k) {
  if (num_classes < 2) {
    throw std::invalid_argument("num_classes must be >= 2");
  }
  if (labels.size() != features.rows()) {
    throw std::invalid_argument("features and labels differ in row count");
  }
  Matrix targets = Matrix::Zero(labels.size(), num_classes);
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(labels[i]) +
                                  " out of range at row " + std::to_string(i));
    }
    targets(i, labels[i]) = Scalar(1);
  }
  return fit(std::move(features), std::move(targets), TargetMode::kScalar, k);
}

std::vector<Index> neighbors(const KnnModel& model,
                             const Eigen::Ref<const Vector>& x) {
  Workspace ws;
  std::vector<Index> out;
  k_nearest(model, x, ws, out);
  return out;
}

Vector score(const KnnModel& model, const Eigen::Ref<const Vector>& x) {
  Workspace ws;
  std::vector<Index> nearest;
  k_nearest(model, x, ws, nearest);
  Vector out;
  score_into(model, nearest, out);
  return out;
}

Matrix score_batch(const KnnModel& model,
                   const Eigen::Ref<const Matrix>& queries) {
  Matrix out(queries.rows(), model.num_classes());
  Workspace ws;
  std::vector<Index> nearest;
  Vector row;
  for (Index q = 0; q < queries.rows(); ++q) {
    k_nearest(model, queries.row(q).transpose(), ws, nearest);
    score_into(model, nearest, row);
    out.row(q) = row;
  }
  return out;
}

int predict(const KnnModel& model, const Eigen::Ref<const Vector>& x) {
  const Vector g = score(model, x);
  return static_cast<int>(argmax_lowest(g));
}

IntVector predict_batch(const KnnModel& model,
                  const Eigen::Ref<const Matrix>& queries) {
  IntVector out(queries.rows());
  Workspace ws;
  std::vector<Index> nearest;
  Vector row;
  for (Index q = 0; q < queries.rows(); ++q) {
    k_nearest(model, queries.row(q).transpose(), ws, nearest);
    score_into(model, nearest, row);
    out[q] = static_cast<int>(argmax_lowest(row));
  }
  return out;
}

Vector debias(const Eigen::Ref<const Vector>& score_vec, Scalar epsilon) {
  if (!(epsilon > Scalar(0))) {
    throw std::domain_error(
        "debias is singular at epsilon = 0 and undefined for epsilon < 0");
  }
  if (((score_vec.array() < Scalar(0)) || (score_vec.array() > Scalar(1)))
          .any()) {
    throw std::invalid_argument("score entries must lie in [0, 1]");
  }
  // Inverse of s = 1/2 + (eta - 1/2) * tanh(eps/4); slope 1 at infinity.
  const Scalar slope =
      std::isinf(epsilon) ? Scalar(1) : std::tanh(epsilon / Scalar(4));
  return (Scalar(0.5) + ((score_vec.array() - Scalar(0.5)) / slope)).matrix();
}

}  // namespace labeldp::knn
