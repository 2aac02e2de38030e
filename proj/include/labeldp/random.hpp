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

#ifndef LABELDP_RANDOM_HPP
#define LABELDP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "labeldp/types.hpp"

namespace labeldp {

// splitmix64 finalizer. Used to turn structured seed material (method id,
// class count, trial index, ...) into well-mixed engine seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed derivation: fold up to three path components into a
// base seed. derive_seed(s, a) != derive_seed(s, a') for distinct paths
// except with negligible collision probability.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

// Deterministic random source. The engine (std::mt19937_64) has a fully
// specified output sequence, and every sampler below is hand-rolled on top
// of raw 64-bit draws, so a given seed yields the same stream on every
// platform and standard library. Do not replace the samplers with
// std::*_distribution: those are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  Scalar uniform() {
    return static_cast<Scalar>(next() >> 11) * Scalar(0x1.0p-53);
  }

  // Uniform on the open interval (0, 1); safe to pass through log().
  Scalar uniform_open() {
    return (static_cast<Scalar>(next() >> 11) + Scalar(0.5)) * Scalar(0x1.0p-53);
  }

  bool bernoulli(Scalar p) { return uniform() < p; }

  // Uniform integer in [0, n). Rejection sampling on the low bits keeps the
  // draw exactly uniform for every n.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller; the second deviate is cached.
  Scalar normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const Scalar u1 = uniform_open();
    const Scalar u2 = uniform();
    const Scalar r = std::sqrt(Scalar(-2) * std::log(u1));
    const Scalar theta = Scalar(2) * Scalar(M_PI) * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Laplace with the given scale (mean zero), by CDF inversion.
  Scalar laplace(Scalar scale) {
    if (scale == Scalar(0)) return Scalar(0);
    const Scalar u = uniform_open() - Scalar(0.5);  // (-1/2, 1/2)
    const Scalar sign = u < Scalar(0) ? Scalar(-1) : Scalar(1);
    return -scale * sign * std::log1p(Scalar(-2) * std::abs(u));
  }

 private:
  std::mt19937_64 gen_;
  Scalar spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace labeldp

#endif  // LABELDP_RANDOM_HPP
