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
// Local label-DP randomizers. Labels are 0-based throughout the public API.
// Every randomizer guarantees eps-label-DP with respect to its true label
// input; verify_label_dp checks that claim by exhaustive enumeration of the
// output space where the space is finite.

#ifndef LABELDP_MECHANISMS_HPP
#define LABELDP_MECHANISMS_HPP

#include <vector>

#include "labeldp/random.hpp"
#include "labeldp/types.hpp"

namespace labeldp::mechanisms {

enum class Kind {
  kRandomizedResponse,  // K-ary randomized response over [K]
  kRRWithPrior,         // randomized response restricted to a prior top set
  kAlibi,               // one-hot + per-coordinate Laplace noise
  kVectorApprox,        // independent per-coordinate bit flips
};

struct MechanismSpec {
  Kind kind = Kind::kVectorApprox;
  Scalar epsilon = 1;
  int num_classes = 2;

  // Throws std::invalid_argument unless epsilon > 0 (infinity allowed,
  // meaning no privacy) and num_classes >= 2.
  void validate() const;
};

// Probability that a coordinate matching the true label stays 1 under the
// vector mechanism: e^{eps/2} / (1 + e^{eps/2}). A non-matching coordinate
// becomes 1 with the complementary probability 1 / (1 + e^{eps/2}).
Scalar keep_probability(Scalar epsilon);

// Expected value of coordinate j of the privatized vector given the
// regression function value eta_j, i.e. the privatized regression function:
//   eta~_j = 1/(1+e^{eps/2}) + eta_j * (e^{eps/2}-1)/(e^{eps/2}+1).
// Affine with positive slope, so argmaxes are preserved.
Scalar privatized_mean(Scalar eta_j, Scalar epsilon);
Vector privatized_mean(const Eigen::Ref<const Vector>& eta, Scalar epsilon);

// Draws Z in {0,1}^K with independent coordinates: coordinate `label` is 1
// with keep_probability(eps), every other coordinate with its complement.
// Requires spec.kind == kVectorApprox and label in [0, K).
Vector vector_privatize(int label, const MechanismSpec& spec, Rng& rng);

// K-ary randomized response: keep the label with probability
// e^eps / (e^eps + K - 1), otherwise return a uniform other class.
int rr_privatize(int label, const MechanismSpec& spec, Rng& rng);

// The optimal candidate set for randomized response with a prior: the top-j*
// classes by prior mass, where j* maximizes
//   w_j = e^eps / (e^eps + j - 1) * (prior mass of the top-j classes).
// Prior ties are broken toward the lower class index; w_j ties toward the
// smaller j. Returned indices are sorted ascending.
std::vector<int> rrwithprior_candidates(const Eigen::Ref<const Vector>& prior,
                                        Scalar epsilon);

// Randomized response over the candidate set: if the true label is inside,
// keep it with probability e^eps / (e^eps + j* - 1) and spread the rest
// uniformly over the other candidates; if outside, return a uniform
// candidate. eps-label-DP for any prior that does not depend on the label.
int rrwithprior_privatize(int label, const Eigen::Ref<const Vector>& prior,
                          Scalar epsilon, Rng& rng);

// One-hot encoding of the label plus iid Laplace(2/eps) noise on every
// coordinate.
Vector alibi_privatize(int label, const MechanismSpec& spec, Rng& rng);

// Posterior over classes given a noisy one-hot vector:
//   P(Y = k | z) proportional to prior_k * exp(-eps/2 * ||z - e_k||_1),
// computed in log space with max subtraction.
Vector alibi_soft_label(const Eigen::Ref<const Vector>& noisy,
                        const Eigen::Ref<const Vector>& prior, Scalar epsilon);

// Throws std::invalid_argument unless prior is a probability vector:
// nonnegative entries summing to 1 within 1e-9, size >= 2.
void validate_prior(const Eigen::Ref<const Vector>& prior);

// Exact privacy loss sup_{z, y, y'} ln P(z|y) / P(z|y'), by exhaustive
// enumeration of the output space. For kVectorApprox the space is 2^K, so
// num_classes > 12 throws std::length_error. kRRWithPrior requires the
// prior overload. kAlibi has a continuous output space; its loss is the
// analytic value spec.epsilon. Returns +infinity for epsilon = infinity.
Scalar verify_label_dp(const MechanismSpec& spec);
Scalar verify_label_dp(const MechanismSpec& spec,
                       const Eigen::Ref<const Vector>& prior);

}  // namespace labeldp::mechanisms

#endif  // LABELDP_MECHANISMS_HPP
