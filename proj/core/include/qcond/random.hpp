// Copyright 2026 The qcond Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qcond/channels.hpp"
#include "qcond/effects.hpp"
#include "qcond/instruments.hpp"

namespace qcond {

/**
 * SplitMix64 (Steele, Lea, Flood): 64-bit state, one add and a 3-round mix
 * per draw. `split(k)` derives an independent child stream, so every random
 * instance can be reproduced from (seed, stream ids) alone regardless of the
 * order instances are generated in.
 *
 * Gaussian draws use Box-Muller on our own uniforms, so sequences are the
 * same with every standard library.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  SplitMix64 split(std::uint64_t stream) const;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  /// Standard normal.
  double normal();
  /// Standard complex Gaussian: (N1 + i N2) / sqrt(2), E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

/// Stable 64-bit hash of a string (FNV-1a), for deriving named streams.
std::uint64_t stream_id(const char *name);

/// rows x cols matrix of independent standard complex Gaussians.
CMatrix ginibre(std::size_t rows, std::size_t cols, SplitMix64 &rng);
CVector random_unit_vector(std::size_t dim, SplitMix64 &rng);
CMatrix random_unitary(std::size_t dim, SplitMix64 &rng);

/// G G^dagger / tr(G G^dagger) with G square Ginibre.
State random_state(std::size_t dim, SplitMix64 &rng);
State random_state(std::size_t dim, std::uint64_t seed);

/// A_x = S^{-1/2} G_x S^{-1/2} with G_x = g_x g_x^dagger and S = sum G_x.
/// Labels "0".."n-1".
Observable random_observable(std::size_t dim, std::size_t n_outcomes,
                             SplitMix64 &rng);
Observable random_observable(std::size_t dim, std::size_t n_outcomes,
                             std::uint64_t seed);

/// First effect of a random two-outcome observable.
Effect random_effect(std::size_t dim, SplitMix64 &rng);

/// Columns of a Gaussian (n*dimOut) x dimIn matrix are orthonormalized and
/// the result is sliced into n Kraus blocks. Requires n*dimOut >= dimIn.
Channel random_channel(std::size_t dim_in, std::size_t dim_out,
                       std::size_t n_kraus, SplitMix64 &rng);
Channel random_channel(std::size_t dim_in, std::size_t dim_out,
                       std::size_t n_kraus, std::uint64_t seed);

/// A random channel with n_outcomes * kraus_per_outcome Kraus operators,
/// partitioned in order into n_outcomes operations.
Instrument random_instrument(std::size_t dim_in, std::size_t dim_out,
                             std::size_t n_outcomes, SplitMix64 &rng,
                             std::size_t kraus_per_outcome = 2);
Instrument random_instrument(std::size_t dim_in, std::size_t dim_out,
                             std::size_t n_outcomes, std::uint64_t seed,
                             std::size_t kraus_per_outcome = 2);

/// Row-stochastic kernel with uniform-then-normalized rows.
StochasticMatrix random_stochastic(std::size_t rows, std::size_t cols,
                                   SplitMix64 &rng);

/// Probability vector of length n.
std::vector<double> random_weights(std::size_t n, SplitMix64 &rng);

/// Random surjection from `sources` onto labels "0".."n_targets-1".
OutcomeMap random_surjection(const OutcomeSpace &sources,
                             std::size_t n_targets, SplitMix64 &rng);

}  // namespace qcond
