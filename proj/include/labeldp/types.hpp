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

#ifndef LABELDP_TYPES_HPP
#define LABELDP_TYPES_HPP

#include <Eigen/Dense>
#include <limits>

// The library is written against a configurable floating-point scalar.
// Define LABELDP_SCALAR_T before including any labeldp header to switch
// the whole library to another type (e.g. float or long double).
#ifndef LABELDP_SCALAR_T
#define LABELDP_SCALAR_T double
#endif

namespace labeldp {

using Scalar = LABELDP_SCALAR_T;
using Index = Eigen::Index;

using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<int, Eigen::Dynamic, 1>;

// Sentinel for the non-private limit. All privacy maps accept it and
// degenerate to the identity / keep-always behaviour.
inline constexpr Scalar kInfiniteEpsilon = std::numeric_limits<Scalar>::infinity();

// Index of the largest coefficient; ties resolve to the lowest index.
// Every argmax in the library (predictions, Bayes rule, posterior modes)
// goes through this so tie-breaking is uniform.
inline Index argmax_lowest(const Eigen::Ref<const Vector>& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

// Index of the smallest coefficient; ties resolve to the lowest index.
inline Index argmin_lowest(const Eigen::Ref<const Vector>& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

}  // namespace labeldp

#endif  // LABELDP_TYPES_HPP
