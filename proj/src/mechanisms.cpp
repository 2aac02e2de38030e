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

#include "labeldp/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace labeldp::mechanisms {

namespace {

void check_epsilon(Scalar epsilon) {
  if (!(epsilon > Scalar(0))) {
    throw std::invalid_argument("epsilon must be positive, got " +
                                std::to_string(epsilon));
  }
}

void check_label(int label, int num_classes) {
  if (label < 0 || label >= num_classes) {
    throw std::invalid_argument("label " + std::to_string(label) +
                                " out of range [0, " +
                                std::to_string(num_classes) + ")");
  }
}

void check_kind(const MechanismSpec& spec, Kind expected, const char* name) {
  if (spec.kind != expected) {
    throw std::invalid_argument(std::string(name) +
                                " called with mismatched spec.kind");
  }
}

// Probability of keeping the true label under K-ary randomized response,
// e^eps / (e^eps + K - 1), in the overflow-free form 1 / (1 + (K-1)e^-eps).
Scalar rr_keep_probability(Scalar epsilon, int num_classes) {
  if (std::isinf(epsilon)) return Scalar(1);
  return Scalar(1) /
         (Scalar(1) + Scalar(num_classes - 1) * std::exp(-epsilon));
}

}  // namespace

void MechanismSpec::validate() const {
  check_epsilon(epsilon);
  if (num_classes < 2) {
    throw std::invalid_argument("num_classes must be >= 2, got " +
                                std::to_string(num_classes));
  }
}

Scalar keep_probability(Scalar epsilon) {
  check_epsilon(epsilon);
  if (std::isinf(epsilon)) return Scalar(1);
  // e^{eps/2} / (1 + e^{eps/2}) = logistic(eps/2).
  return Scalar(1) / (Scalar(1) + std::exp(-epsilon / Scalar(2)));
}

Scalar privatized_mean(Scalar eta_j, Scalar epsilon) {
  check_epsilon(epsilon);
  if (!(eta_j >= Scalar(0) && eta_j <= Scalar(1))) {
    throw std::invalid_argument("eta value outside [0, 1]");
  }
  // (e^{eps/2} - 1) / (e^{eps/2} + 1) = tanh(eps/4); at infinity the slope
  // is 1 and the map is the identity.
  const Scalar slope = std::isinf(epsilon) ? Scalar(1) : std::tanh(epsilon / Scalar(4));
  return Scalar(0.5) + (eta_j - Scalar(0.5)) * slope;
}

Vector privatized_mean(const Eigen::Ref<const Vector>& eta, Scalar epsilon) {
  Vector out(eta.size());
  for (Index j = 0; j < eta.size(); ++j) out[j] = privatized_mean(eta[j], epsilon);
  return out;
}

Vector vector_privatize(int label, const MechanismSpec& spec, Rng& rng) {
  spec.validate();
  check_kind(spec, Kind::kVectorApprox, "vector_privatize");
  check_label(label, spec.num_classes);
  const Scalar p = keep_probability(spec.epsilon);
  Vector z(spec.num_classes);
  for (int j = 0; j < spec.num_classes; ++j) {
    const Scalar p_one = (j == label) ? p : Scalar(1) - p;
    z[j] = rng.bernoulli(p_one) ? Scalar(1) : Scalar(0);
  }
  return z;
}

int rr_privatize(int label, const MechanismSpec& spec, Rng& rng) {
  spec.validate();
  check_kind(spec, Kind::kRandomizedResponse, "rr_privatize");
  check_label(label, spec.num_classes);
  const Scalar keep = rr_keep_probability(spec.epsilon, spec.num_classes);
  if (rng.bernoulli(keep)) return label;
  const int r = static_cast<int>(rng.below(spec.num_classes - 1));
  return r + (r >= label ? 1 : 0);
}

std::vector<int> rrwithprior_candidates(const Eigen::Ref<const Vector>& prior,
                                        Scalar epsilon) {
  validate_prior(prior);
  check_epsilon(epsilon);
  const int num_classes = static_cast<int>(prior.size());
  std::vector<int> order(num_classes);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&prior](int a, int b) {
    if (prior[a] != prior[b]) return prior[a] > prior[b];
    return a < b;
  });
  // w_j = keep(j) * (prior mass of the top-j classes); keep(j) is the
  // randomized-response keep probability over j outcomes.
  int best_j = 1;
  Scalar best_w = Scalar(-1);
  Scalar mass = Scalar(0);
  for (int j = 1; j <= num_classes; ++j) {
    mass += prior[order[j - 1]];
    const Scalar keep =
        std::isinf(epsilon)
            ? Scalar(1)
            : Scalar(1) / (Scalar(1) + Scalar(j - 1) * std::exp(-epsilon));
    const Scalar w = keep * mass;
    if (w > best_w) {
      best_w = w;
      best_j = j;
    }
  }
  std::vector<int> candidates(order.begin(), order.begin() + best_j);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

int rrwithprior_privatize(int label, const Eigen::Ref<const Vector>& prior,
                          Scalar epsilon, Rng& rng) {
  check_label(label, static_cast<int>(prior.size()));
  const std::vector<int> candidates = rrwithprior_candidates(prior, epsilon);
  const int m = static_cast<int>(candidates.size());
  const bool inside =
      std::binary_search(candidates.begin(), candidates.end(), label);
  if (!inside) return candidates[rng.below(m)];
  if (m == 1) return label;
  const Scalar keep = std::isinf(epsilon)
                          ? Scalar(1)
                          : Scalar(1) / (Scalar(1) + Scalar(m - 1) *
                                                         std::exp(-epsilon));
  if (rng.bernoulli(keep)) return label;
  int r = static_cast<int>(rng.below(m - 1));
  // Skip the slot holding the true label.
  for (int i = 0; i <= r; ++i) {
    if (candidates[i] == label) {
      ++r;
      break;
    }
  }
  return candidates[r];
}

Vector alibi_privatize(int label, const MechanismSpec& spec, Rng& rng) {
  spec.validate();
  check_kind(spec, Kind::kAlibi, "alibi_privatize");
  check_label(label, spec.num_classes);
  const Scalar scale =
      std::isinf(spec.epsilon) ? Scalar(0) : Scalar(2) / spec.epsilon;
  Vector z(spec.num_classes);
  for (int j = 0; j < spec.num_classes; ++j) {
    z[j] = (j == label ? Scalar(1) : Scalar(0)) + rng.laplace(scale);
  }
  return z;
}

Vector alibi_soft_label(const Eigen::Ref<const Vector>& noisy,
                        const Eigen::Ref<const Vector>& prior,
                        Scalar epsilon) {
  validate_prior(prior);
  check_epsilon(epsilon);
  if (noisy.size() != prior.size()) {
    throw std::invalid_argument("noisy vector and prior differ in length");
  }
  const Index num_classes = prior.size();
  // l1 distance from the noisy vector to each one-hot encoding.
  Vector dist(num_classes);
  const Scalar abs_sum = noisy.array().abs().sum();
  for (Index k = 0; k < num_classes; ++k) {
    dist[k] = abs_sum - std::abs(noisy[k]) + std::abs(noisy[k] - Scalar(1));
  }
  Vector weights(num_classes);
  if (std::isinf(epsilon)) {
    // Limit posterior: prior restricted to the minimum-distance classes.
    Scalar min_dist = std::numeric_limits<Scalar>::infinity();
    for (Index k = 0; k < num_classes; ++k) {
      if (prior[k] > Scalar(0)) min_dist = std::min(min_dist, dist[k]);
    }
    for (Index k = 0; k < num_classes; ++k) {
      weights[k] =
          (prior[k] > Scalar(0) && dist[k] == min_dist) ? prior[k] : Scalar(0);
    }
  } else {
    Vector logw(num_classes);
    for (Index k = 0; k < num_classes; ++k) {
      logw[k] = std::log(prior[k]) - epsilon / Scalar(2) * dist[k];
    }
    const Scalar m = logw.maxCoeff();
    weights = (logw.array() - m).exp();
  }
  return weights / weights.sum();
}

void validate_prior(const Eigen::Ref<const Vector>& prior) {
  if (prior.size() < 2) {
    throw std::invalid_argument("prior must have at least 2 entries");
  }
  if ((prior.array() < Scalar(0)).any()) {
    throw std::invalid_argument("prior has a negative entry");
  }
  const Scalar sum = prior.sum();
  if (std::abs(sum - Scalar(1)) > Scalar(1e-9)) {
    throw std::invalid_argument("prior sums to " + std::to_string(sum) +
                                ", expected 1");
  }
}

namespace {

// Max over outputs of (max_y ln P(z|y) - min_y ln P(z|y)) for a finite
// family of log-likelihood rows. Rows marked unattained are skipped.
Scalar max_log_ratio(const Matrix& log_prob) {
  Scalar worst = Scalar(0);
  for (Index z = 0; z < log_prob.rows(); ++z) {
    const Scalar hi = log_prob.row(z).maxCoeff();
    const Scalar lo = log_prob.row(z).minCoeff();
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

Scalar verify_rr(const MechanismSpec& spec) {
  if (std::isinf(spec.epsilon)) return kInfiniteEpsilon;
  const int num_classes = spec.num_classes;
  const Scalar log_keep = -std::log1p(Scalar(num_classes - 1) *
                                      std::exp(-spec.epsilon));
  const Scalar log_other =
      -(spec.epsilon +
        std::log1p(Scalar(num_classes - 1) * std::exp(-spec.epsilon)));
  Matrix log_prob(num_classes, num_classes);  // rows: outputs, cols: labels
  for (int z = 0; z < num_classes; ++z) {
    for (int y = 0; y < num_classes; ++y) {
      log_prob(z, y) = (z == y) ? log_keep : log_other;
    }
  }
  return max_log_ratio(log_prob);
}

Scalar verify_vector(const MechanismSpec& spec) {
  if (spec.num_classes > 12) {
    throw std::length_error(
        "verify_label_dp enumerates 2^K outputs; num_classes > 12 "
        "unsupported");
  }
  if (std::isinf(spec.epsilon)) return kInfiniteEpsilon;
  const int num_classes = spec.num_classes;
  const Scalar log_p = -std::log1p(std::exp(-spec.epsilon / Scalar(2)));
  const Scalar log_q = -spec.epsilon / Scalar(2) -
                       std::log1p(std::exp(-spec.epsilon / Scalar(2)));
  const std::uint64_t num_outputs = std::uint64_t(1) << num_classes;
  Scalar worst = Scalar(0);
  Vector row(num_classes);
  for (std::uint64_t z = 0; z < num_outputs; ++z) {
    for (int y = 0; y < num_classes; ++y) {
      Scalar lp = Scalar(0);
      for (int j = 0; j < num_classes; ++j) {
        const bool bit = (z >> j) & 1u;
        // Coordinate j is 1 w.p. p when j == y, else w.p. 1 - p.
        if (j == y) {
          lp += bit ? log_p : log_q;
        } else {
          lp += bit ? log_q : log_p;
        }
      }
      row[y] = lp;
    }
    worst = std::max(worst, row.maxCoeff() - row.minCoeff());
  }
  return worst;
}

Scalar verify_rrwithprior(const MechanismSpec& spec,
                          const Eigen::Ref<const Vector>& prior) {
  if (prior.size() != spec.num_classes) {
    throw std::invalid_argument("prior length does not match num_classes");
  }
  if (std::isinf(spec.epsilon)) return kInfiniteEpsilon;
  const std::vector<int> candidates =
      rrwithprior_candidates(prior, spec.epsilon);
  const int m = static_cast<int>(candidates.size());
  if (m == 1) return Scalar(0);  // constant output reveals nothing
  const Scalar log_keep =
      -std::log1p(Scalar(m - 1) * std::exp(-spec.epsilon));
  const Scalar log_other =
      -(spec.epsilon + std::log1p(Scalar(m - 1) * std::exp(-spec.epsilon)));
  const Scalar log_unif = -std::log(Scalar(m));
  Matrix log_prob(m, spec.num_classes);
  for (int zi = 0; zi < m; ++zi) {
    for (int y = 0; y < spec.num_classes; ++y) {
      const bool inside =
          std::binary_search(candidates.begin(), candidates.end(), y);
      if (!inside) {
        log_prob(zi, y) = log_unif;
      } else {
        log_prob(zi, y) = (candidates[zi] == y) ? log_keep : log_other;
      }
    }
  }
  return max_log_ratio(log_prob);
}

}  // namespace

Scalar verify_label_dp(const MechanismSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case Kind::kRandomizedResponse:
      return verify_rr(spec);
    case Kind::kVectorApprox:
      return verify_vector(spec);
    case Kind::kAlibi:
      // Continuous output space; the loss is analytic: the densities of
      // z given y and y' differ by at most e^{eps/2 * ||e_y - e_y'||_1}
      // = e^eps pointwise.
      return spec.epsilon;
    case Kind::kRRWithPrior:
      throw std::invalid_argument(
          "verify_label_dp for kRRWithPrior requires the prior overload");
  }
  throw std::invalid_argument("unknown mechanism kind");
}

Scalar verify_label_dp(const MechanismSpec& spec,
                       const Eigen::Ref<const Vector>& prior) {
  spec.validate();
  if (spec.kind != Kind::kRRWithPrior) return verify_label_dp(spec);
  return verify_rrwithprior(spec, prior);
}

}  // namespace labeldp::mechanisms
