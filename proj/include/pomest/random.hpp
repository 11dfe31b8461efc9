// Copyright 2026 The pomest Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"

namespace pomest {

/// mt19937_64 with portable uniform and Gaussian draws, so that a seed
/// gives the same stream with any standard library.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }
  /// [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi].
  Index integer(Index lo, Index hi);
  double normal();
  Complex complex_normal();  // E|z|^2 = 1

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0;
};

Ket random_ket(Index dim, Rng& rng);
/// Ginibre construction, full rank unless `rank` is given.
DensityOperator random_density(Index dim, Rng& rng, Index rank = 0);
/// Entries of scale ~1.
HermitianOperator random_hermitian(Index dim, Rng& rng);
Matrix random_unitary(Index dim, Rng& rng);
/// K outcomes T^{-1/2} G_k T^{-1/2} from random positive G_k of the given
/// rank, with scalar values drawn from [-2, 2].
PomPtr random_pom(Index dim, Index outcomes, Rng& rng, Index rank = 0);

}  // namespace pomest
