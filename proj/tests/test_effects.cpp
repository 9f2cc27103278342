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

#include <functional>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcond/effects.hpp"
#include "qcond/errors.hpp"
#include "qcond/random.hpp"

namespace qcond {
namespace {

std::string invariant_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const InvariantError &e) {
    return e.invariant();
  }
  return "";
}

Observable computational(std::size_t d) {
  std::vector<CMatrix> es;
  for (std::size_t i = 0; i < d; ++i) es.push_back(oracle::proj(d, i));
  return Observable(OutcomeSpace::range(d), es);
}

TEST(OutcomeSpace, RejectsDuplicatesAndIndexes) {
  EXPECT_THROW(OutcomeSpace({"a", "a"}), InvariantError);
  const OutcomeSpace o({"a", "b", "c"});
  EXPECT_EQ(o.index_of("c"), 2u);
  EXPECT_THROW(o.index_of("z"), UnknownLabel);
  const OutcomeSpace p = OutcomeSpace::product(o, OutcomeSpace({"0", "1"}));
  EXPECT_EQ(p.size(), 6u);
  EXPECT_EQ(p.label(3), "b⊗1");
}

TEST(State, Invariants) {
  EXPECT_EQ(invariant_of([] { State(oracle::diag({0.6, 0.6})); }), "trace");
  EXPECT_EQ(invariant_of([] { State(oracle::diag({1.5, -0.5})); }), "psd");
  EXPECT_NO_THROW(State(oracle::diag({0.5, 0.5})));
  EXPECT_EQ(State::maximally_mixed(3).matrix(), CMatrix(identity(3) / 3.0));
}

TEST(Effect, InvariantsAndComplement) {
  EXPECT_THROW(Effect(CMatrix(2.0 * identity(2))), InvariantError);
  EXPECT_THROW(Effect(oracle::diag({1, -0.1})), InvariantError);
  const Effect a(oracle::diag({0.25, 1.0}));
  EXPECT_EQ(a.complement().matrix(), oracle::diag({0.75, 0.0}));
}

TEST(Observable, NormalizationIsNamed) {
  EXPECT_EQ(invariant_of([] {
              Observable(OutcomeSpace::range(2),
                         std::vector<CMatrix>{CMatrix(0.5 * identity(2)),
                                              CMatrix(0.49 * identity(2))});
            }),
            "normalization");
  EXPECT_EQ(invariant_of([] {
              Observable(OutcomeSpace::range(2),
                         std::vector<CMatrix>{identity(2), zeros(3, 3)});
            }),
            "dimension");
}

TEST(BornProbability, Examples) {
  const State zero = State::pure(oracle::ket(2, 0));
  EXPECT_NEAR(born_probability(zero, Effect(oracle::proj(2, 0))), 1.0, 1e-15);
  SplitMix64 rng(1);
  const State rho = random_state(3, rng);
  EXPECT_NEAR(born_probability(rho, Effect::zero(3)), 0.0, 1e-15);
  EXPECT_NEAR(born_probability(rho, Effect::identity(3)), 1.0, 1e-12);
  EXPECT_NEAR(born_probability(State::maximally_mixed(2),
                               Effect(oracle::proj(2, 0))),
              0.5, 1e-15);
}

TEST(BornProbability, DimensionMismatch) {
  EXPECT_THROW(born_probability(State::maximally_mixed(2), Effect::identity(3)),
               DimensionError);
}

TEST(Distribution, Examples) {
  const Observable A = computational(2);
  const State rho(oracle::diag({0.3, 0.7}));
  EXPECT_EQ(observable_distribution(rho, A, {}), 0.0);
  EXPECT_NEAR(observable_distribution(rho, A, {"0", "1"}), 1.0, 1e-15);
  EXPECT_NEAR(observable_distribution(rho, A, {"0"}), 0.3, 1e-15);
  EXPECT_THROW(observable_distribution(rho, A, {"7"}), UnknownLabel);
}

TEST(Distribution, FullSetIsOneOnRandomInstances) {
  SplitMix64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Observable A = random_observable(3, 4, rng);
    const State rho = random_state(3, rng);
    double total = 0.0;
    for (const auto &e : A.effects()) {
      const double p = born_probability(rho, e);
      EXPECT_GE(p, -1e-9);
      EXPECT_LE(p, 1.0 + 1e-9);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR(observable_distribution(rho, A, A.outcomes().labels()), 1.0, 1e-9);
  }
}

TEST(StochasticMatrix, RowSumsAndClamping) {
  Eigen::MatrixXd w(2, 2);
  w << 0.5, 0.4, 0.5, 0.5;
  EXPECT_EQ(invariant_of([&] { StochasticMatrix(OutcomeSpace::range(2), w); }),
            "row-sum");
  w << 1.0 + 1e-12, -1e-12, 0.5, 0.5;
  const StochasticMatrix s(OutcomeSpace::range(2), w);
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s(0, 1), 0.0);
}

TEST(PostProcess, IdentityKernelAndTotalCoarseGraining) {
  SplitMix64 rng(3);
  const Observable A = random_observable(3, 3, rng);
  EXPECT_EQ(max_deviation(post_process(A, StochasticMatrix::identity(A.outcomes())), A),
            0.0);
  const StochasticMatrix one(OutcomeSpace({"*"}), Eigen::MatrixXd::Ones(3, 1));
  const Observable B = post_process(A, one);
  ASSERT_EQ(B.size(), 1u);
  EXPECT_LE(max_abs_diff(B[0].matrix(), identity(3)), 1e-12);
}

TEST(PostProcess, MatchesDenseSumOracle) {
  SplitMix64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Observable A = random_observable(3, 3, rng);
    const StochasticMatrix lam = random_stochastic(3, 2, rng);
    const Observable B = post_process(A, lam);
    for (std::size_t y = 0; y < 2; ++y) {
      CMatrix want = CMatrix::Zero(3, 3);
      for (std::size_t x = 0; x < 3; ++x) want += lam(x, y) * A[x].matrix();
      EXPECT_LE(oracle::max_abs_diff(B[y].matrix(), want), 1e-15);
    }
  }
}

TEST(PostProcess, ComposedKernelIsSingleKernel) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Observable A = random_observable(2 + t % 3, 3, rng);
    const StochasticMatrix lam = random_stochastic(3, 4, rng);
    const StochasticMatrix mu = random_stochastic(4, 2, rng);
    const StochasticMatrix delta = then(lam, mu);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t z = 0; z < 2; ++z) {
        double want = 0.0;
        for (std::size_t y = 0; y < 4; ++y) want += lam(x, y) * mu(y, z);
        EXPECT_NEAR(delta(x, z), want, 1e-15);
      }
    }
    EXPECT_LE(max_deviation(post_process(post_process(A, lam), mu),
                            post_process(A, delta)),
              1e-12);
  }
}

TEST(PostProcess, RowCountMismatch) {
  SplitMix64 rng(6);
  const Observable A = random_observable(2, 3, rng);
  EXPECT_THROW(post_process(A, random_stochastic(2, 2, rng)), DimensionError);
}

TEST(Part, IdentityAndPairCollapse) {
  SplitMix64 rng(7);
  const Observable A = random_observable(3, 4, rng);
  EXPECT_EQ(max_deviation(part(A, OutcomeMap::identity(A.outcomes())), A), 0.0);
  const OutcomeMap f({{"0", "a"}, {"1", "a"}, {"2", "b"}, {"3", "b"}},
                     OutcomeSpace({"a", "b"}));
  const Observable B = part(A, f);
  EXPECT_LE(oracle::max_abs_diff(B[0].matrix(), A[0].matrix() + A[1].matrix()),
            1e-15);
  EXPECT_LE(oracle::max_abs_diff(B[1].matrix(), A[2].matrix() + A[3].matrix()),
            1e-15);
}

TEST(Part, EqualsIndicatorPostProcessing) {
  SplitMix64 rng(8);
  const Observable A = random_observable(2, 4, rng);
  const OutcomeMap f = random_surjection(A.outcomes(), 2, rng);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 2);
  for (std::size_t x = 0; x < 4; ++x) {
    w(x, f.targets().index_of(f(A.outcomes().label(x)))) = 1.0;
  }
  EXPECT_LE(max_deviation(part(A, f),
                          post_process(A, StochasticMatrix(f.targets(), w))),
            1e-15);
}

TEST(Part, CompositionIsCompositeSurjection) {
  SplitMix64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const Observable A = random_observable(2 + t % 3, 5, rng);
    const OutcomeMap f = random_surjection(A.outcomes(), 3, rng);
    const OutcomeMap g = random_surjection(f.targets(), 2, rng);
    EXPECT_LE(max_deviation(part(part(A, f), g), part(A, compose(g, f))), 1e-12);
  }
}

TEST(Part, RejectsNonSurjectiveMaps) {
  EXPECT_THROW(OutcomeMap({{"0", "a"}, {"1", "a"}}, OutcomeSpace({"a", "b"})),
               InvariantError);
}

TEST(Marginals, ProductGrid) {
  SplitMix64 rng(10);
  const Observable A = random_observable(2, 3, rng);
  const std::vector<double> lam = {0.2, 0.8};
  std::vector<Effect> grid;
  for (const auto &a : A.effects()) {
    for (double l : lam) grid.emplace_back(l * a.matrix());
  }
  const BiObservable C(A.outcomes(), OutcomeSpace::range(2), grid);
  const auto [m1, m2] = marginals(C);
  EXPECT_LE(max_deviation(m1, A), 1e-15);
  EXPECT_LE(max_abs_diff(m2[0].matrix(), CMatrix(0.2 * identity(2))), 1e-15);
}

TEST(Marginals, DegenerateAxisAndProjections) {
  SplitMix64 rng(11);
  const Observable row = random_observable(2, 3, rng);
  const BiObservable C(OutcomeSpace({"1"}), row.outcomes(), row.effects());
  const auto [m1, m2] = marginals(C);
  EXPECT_LE(max_abs_diff(m1[0].matrix(), identity(2)), 1e-12);
  EXPECT_EQ(max_deviation(m2, row), 0.0);

  const Observable big = random_observable(3, 6, rng);
  const BiObservable G(OutcomeSpace::range(2), OutcomeSpace::range(3),
                       big.effects());
  const auto [g1, g2] = marginals(G);
  const Observable flat = G.flatten();
  EXPECT_LE(max_deviation(
                g1, part(flat, OutcomeMap::first_projection(G.first(), G.second()))),
            1e-15);
  EXPECT_LE(max_deviation(
                g2, part(flat, OutcomeMap::second_projection(G.first(), G.second()))),
            1e-15);
}

TEST(Affine, ExtremeIdempotentAndRandom) {
  SplitMix64 rng(12);
  const Observable A = random_observable(2, 3, rng);
  const Observable B = random_observable(2, 3, rng);
  EXPECT_EQ(max_deviation(affine_combination({A, B}, {1.0, 0.0}), A), 0.0);
  EXPECT_LE(max_deviation(affine_combination({A, A}, {0.5, 0.5}), A), 1e-15);
  const Observable C = affine_combination({A, B}, {0.25, 0.75});
  for (std::size_t x = 0; x < 3; ++x) {
    EXPECT_LE(oracle::max_abs_diff(C[x].matrix(),
                                   0.25 * A[x].matrix() + 0.75 * B[x].matrix()),
              1e-15);
  }
}

TEST(Affine, Errors) {
  SplitMix64 rng(13);
  const Observable A = random_observable(2, 3, rng);
  const Observable B = random_observable(2, 2, rng);
  EXPECT_EQ(invariant_of([&] { affine_combination({A, A}, {0.5, 0.6}); }),
            "weights");
  EXPECT_EQ(invariant_of([&] { affine_combination({A, B}, {0.5, 0.5}); }),
            "outcomes");
}

TEST(Coexistence, CommutingProjectiveCertificate) {
  // A = computational basis of C^4 grouped by first qubit, B by second.
  std::vector<CMatrix> a, b;
  for (std::size_t i = 0; i < 2; ++i) {
    a.push_back(oracle::kron(oracle::proj(2, i), CMatrix::Identity(2, 2)));
    b.push_back(oracle::kron(CMatrix::Identity(2, 2), oracle::proj(2, i)));
  }
  const Observable A(OutcomeSpace::range(2), a);
  const Observable B(OutcomeSpace::range(2), b);
  std::vector<Effect> grid;
  for (const auto &x : a) {
    for (const auto &y : b) grid.emplace_back(x * y);
  }
  const BiObservable C(A.outcomes(), B.outcomes(), grid);
  EXPECT_TRUE(certify_coexistence(A, B, C));

  std::vector<CMatrix> a2 = a;
  a2[0](0, 0) -= 1e-3;
  a2[1](0, 0) += 1e-3;
  EXPECT_FALSE(certify_coexistence(Observable(A.outcomes(), a2), B, C));
}

TEST(Coexistence, TrivialObservable) {
  const Observable T = Observable::trivial(2);
  const BiObservable C(T.outcomes(), T.outcomes(), {Effect::identity(2)});
  EXPECT_TRUE(certify_coexistence(T, T, C));
}

}  // namespace
}  // namespace qcond
