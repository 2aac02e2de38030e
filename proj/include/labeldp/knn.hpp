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
// Brute-force exact k-nearest-neighbour scoring over per-sample target
// vectors. Targets can be privatized binary vectors, soft labels, or plain
// class labels (stored one-hot); in every mode the score at a query point is
// the coordinatewise mean of the k nearest targets.

#ifndef LABELDP_KNN_HPP
#define LABELDP_KNN_HPP

#include <vector>

#include "labeldp/types.hpp"

namespace labeldp::knn {

enum class TargetMode {
  kScalar,     // class labels, stored as one-hot rows
  kVector,     // binary vectors (e.g. privatized one-hots)
  kSoftLabel,  // probability vectors
};

class KnnModel {
 public:
  KnnModel() = default;

  Index num_samples() const { return features_.rows(); }
  int num_classes() const { return static_cast<int>(targets_.cols()); }
  int k() const { return k_; }
  TargetMode mode() const { return mode_; }
  const Matrix& features() const { return features_; }
  const Matrix& targets() const { return targets_; }

 private:
  friend KnnModel fit(Matrix features, Matrix targets, TargetMode mode, int k);

  Matrix features_;  // N x d
  Matrix targets_;   // N x K
  TargetMode mode_ = TargetMode::kVector;
  int k_ = 1;
};

// Validates and stores the training set. Throws std::invalid_argument if
// row counts differ, k is outside [1, N], or the targets violate the mode:
// kVector requires every entry in {0, 1}; kSoftLabel requires entries in
// [0, 1] with rows summing to 1 within 1e-9.
KnnModel fit(Matrix features, Matrix targets, TargetMode mode, int k);

// Scalar-label convenience: one-hot encodes labels (values in [0, K)).
KnnModel fit(Matrix features, const IntVector& labels, int num_classes, int k);

// Indices of the k nearest training points by Euclidean distance, distance
// ties broken toward the lower sample index. Returned ascending by index.
std::vector<Index> neighbors(const KnnModel& model,
                             const Eigen::Ref<const Vector>& x);

// Score vector g(x): the mean of the k nearest target rows. Entries lie in
// [0, 1]; in kSoftLabel and kScalar mode they sum to 1.
Vector score(const KnnModel& model, const Eigen::Ref<const Vector>& x);
Matrix score_batch(const KnnModel& model,
                   const Eigen::Ref<const Matrix>& queries);

// argmax_j g_j(x), ties to the lowest class index.
int predict(const KnnModel& model, const Eigen::Ref<const Vector>& x);
IntVector predict_batch(const KnnModel& model,
                        const Eigen::Ref<const Matrix>& queries);

// Inverts the privatized-mean map coordinatewise:
//   eta_hat_j = ((1 + e^{eps/2}) s_j - 1) / (e^{eps/2} - 1).
// Unbiased for the true regression function when s is a vector-mechanism
// score; values may leave [0, 1] and are not clipped, since the map is
// affine increasing and downstream argmaxes are unaffected. Throws
// std::domain_error at epsilon = 0 (the map is singular there); epsilon =
// infinity is the identity.
Vector debias(const Eigen::Ref<const Vector>& score_vec, Scalar epsilon);

}  // namespace labeldp::knn

#endif  // LABELDP_KNN_HPP
