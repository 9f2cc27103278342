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

#include <cstdlib>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcond/errors.hpp"
#include "qcond/matkernel.hpp"
#include "qcond/random.hpp"

namespace qcond {
namespace {

const Complex I1(0.0, 1.0);

CMatrix herm_random(std::size_t d, SplitMix64 &rng) {
  const CMatrix g = ginibre(d, d, rng);
  return g + g.adjoint();
}

TEST(Adjoint, NilpotentTransposes) {
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CMatrix want(2, 2);
  want << 0, 0, 1, 0;
  EXPECT_EQ(adjoint(m), want);
}

TEST(Adjoint, IdentityAndScalar) {
  EXPECT_EQ(adjoint(identity(3)), identity(3));
  CMatrix m(1, 1);
  m << I1;
  EXPECT_EQ(adjoint(m)(0, 0), -I1);
}

TEST(Adjoint, IsAnInvolution) {
  SplitMix64 rng(1);
  const CMatrix g = ginibre(3, 4, rng);
  EXPECT_EQ(adjoint(adjoint(g)), g);
  EXPECT_EQ(adjoint(g), oracle::adjoint(g));
}

TEST(Kron, Examples) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
  EXPECT_EQ(kron(oracle::diag({1, 0}), oracle::diag({0, 1})),
            oracle::diag({0, 1, 0, 0}));
}

TEST(Kron, MatchesIndexOracleAndMultipliesTraces) {
  SplitMix64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = ginibre(2, 2, rng);
    const CMatrix b = ginibre(2, 2, rng);
    EXPECT_EQ(kron(a, b), oracle::kron(a, b));
    EXPECT_NEAR(std::abs(trace(kron(a, b)) - oracle::trace(a) * oracle::trace(b)),
                0.0, 1e-12);
  }
  const CMatrix a = ginibre(2, 3, rng);
  const CMatrix b = ginibre(3, 1, rng);
  EXPECT_EQ(kron(a, b), oracle::kron(a, b));
}

TEST(Kron, IsAssociativeEntrywise) {
  SplitMix64 rng(3);
  const CMatrix a = ginibre(2, 2, rng);
  const CMatrix b = ginibre(2, 3, rng);
  const CMatrix c = ginibre(3, 2, rng);
  EXPECT_LE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-14);
}

TEST(PartialTrace, ProductStateKeepsLeftFactor) {
  SplitMix64 rng(4);
  const CMatrix rho = random_state(2, rng).matrix();
  const CMatrix sigma = random_state(3, rng).matrix();
  EXPECT_LE(max_abs_diff(partial_trace_right(kron(rho, sigma), 2, 3), rho), 1e-12);
}

TEST(PartialTrace, IdentityGivesScaledIdentity) {
  EXPECT_EQ(partial_trace_right(identity(4), 2, 2), CMatrix(2.0 * identity(2)));
}

TEST(PartialTrace, MatchesIndexSummationOracle) {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = herm_random(4, rng);
    EXPECT_LE(max_abs_diff(partial_trace_right(m, 2, 2),
                           oracle::ptrace_right(m, 2, 2)),
              1e-13);
    const CMatrix g = ginibre(6, 6, rng);
    EXPECT_LE(max_abs_diff(partial_trace_right(g, 3, 2),
                           oracle::ptrace_right(g, 3, 2)),
              1e-13);
    EXPECT_LE(max_abs_diff(partial_trace_right(g, 2, 3),
                           oracle::ptrace_right(g, 2, 3)),
              1e-13);
  }
}

TEST(PartialTrace, PreservesTraceAndFactorsProducts) {
  SplitMix64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = ginibre(6, 6, rng);
    EXPECT_LE(std::abs(trace(partial_trace_right(m, 2, 3)) - trace(m)), 1e-12);
    const CMatrix a = ginibre(2, 2, rng);
    const CMatrix b = ginibre(3, 3, rng);
    EXPECT_LE(max_abs_diff(partial_trace_right(kron(a, b), 2, 3),
                           CMatrix(trace(b) * a)),
              1e-12);
  }
}

TEST(PartialTrace, RejectsMismatchedDimensions) {
  EXPECT_THROW(partial_trace_right(identity(4), 3, 2), DimensionError);
  EXPECT_THROW(partial_trace_right(zeros(4, 6), 2, 2), DimensionError);
}

TEST(TraceProduct, AgreesWithOracle) {
  SplitMix64 rng(7);
  const CMatrix a = ginibre(3, 3, rng);
  const CMatrix b = ginibre(3, 3, rng);
  EXPECT_NEAR(std::abs(trace_product(a, b) - oracle::trace_product(a, b)), 0.0,
              1e-13);
}

TEST(IsPsd, Examples) {
  const Tolerance tol;
  EXPECT_TRUE(is_psd(oracle::diag({1, 0}), tol));
  EXPECT_FALSE(is_psd(oracle::diag({1, -1e-3}), tol));
  CMatrix nil(2, 2);
  nil << 0, 1, 0, 0;
  EXPECT_FALSE(is_psd(nil, tol));
}

TEST(IsPsd, ToleranceBoundary) {
  const Tolerance tol{1e-9};
  EXPECT_TRUE(is_psd(oracle::diag({1, -5e-10}), tol));
  EXPECT_FALSE(is_psd(oracle::diag({1, -5e-9}), tol));
}

TEST(IsEffect, Examples) {
  const Tolerance tol;
  for (std::size_t d = 1; d <= 4; ++d) {
    EXPECT_TRUE(is_effect(CMatrix(0.5 * identity(d)), tol));
  }
  EXPECT_FALSE(is_effect(CMatrix(2.0 * identity(2)), tol));
  SplitMix64 rng(8);
  const CVector v = random_unit_vector(3, rng);
  EXPECT_TRUE(is_effect(outer(v), tol));
}

TEST(IsEffect, ClosedUnderComplement) {
  const Tolerance tol;
  SplitMix64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const CMatrix m = herm_random(3, rng) * 0.2 + 0.5 * identity(3);
    EXPECT_EQ(is_effect(m, tol), is_effect(identity(3) - m, tol));
  }
}

TEST(Spectral, ReconstructsAndClipsTinyNegatives) {
  const Tolerance tol;
  SplitMix64 rng(10);
  const CMatrix rho = random_state(3, rng).matrix();
  const Spectrum s = spectral_decomposition(rho, tol);
  CMatrix back = zeros(3, 3);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    back += s.values[k] * outer(s.vectors[k]);
  }
  EXPECT_LE(max_abs_diff(back, rho), 1e-12);
  const Spectrum c = spectral_decomposition(oracle::diag({1, -1e-12}), tol);
  for (double v : c.values) EXPECT_GE(v, 0.0);
}

TEST(PsdRoots, SquareAndInverse) {
  const Tolerance tol;
  SplitMix64 rng(11);
  const CMatrix g = ginibre(3, 3, rng);
  const CMatrix p = g * g.adjoint() + identity(3);
  const CMatrix r = psd_sqrt(p, tol);
  EXPECT_LE(max_abs_diff(r * r, p), 1e-11);
  const CMatrix w = psd_inv_sqrt(p, tol);
  EXPECT_LE(max_abs_diff(w * p * w, identity(3)), 1e-11);
  try {
    psd_inv_sqrt(oracle::diag({1, 0}), tol);
    FAIL() << "expected a singular error";
  } catch (const InvariantError &e) {
    EXPECT_EQ(e.invariant(), "singular");
  }
}

TEST(ToleranceEnv, OverridesDefault) {
  ::setenv("QCOND_TOL", "1e-6", 1);
  EXPECT_DOUBLE_EQ(Tolerance::from_env().atol, 1e-6);
  ::setenv("QCOND_TOL", "garbage", 1);
  EXPECT_DOUBLE_EQ(Tolerance::from_env().atol, 1e-9);
  ::unsetenv("QCOND_TOL");
  EXPECT_DOUBLE_EQ(Tolerance::from_env().atol, 1e-9);
}

TEST(MaxAbsDiff, ShapeMismatchIsInfinite) {
  EXPECT_TRUE(std::isinf(max_abs_diff(identity(2), identity(3))));
}

}  // namespace
}  // namespace qcond
