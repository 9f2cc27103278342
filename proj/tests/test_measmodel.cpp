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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcond/errors.hpp"
#include "qcond/measmodel.hpp"
#include "qcond/random.hpp"

namespace qcond {
namespace {

MeasurementModel random_model(std::size_t dh, std::size_t dk,
                              const Observable &probe, SplitMix64 &rng) {
  return MeasurementModel(dh, dk, random_instrument(dh, dh * dk, 3, rng), probe);
}

std::vector<CMatrix> all_kraus(const Instrument &ins) {
  std::vector<CMatrix> ks;
  for (const auto &op : ins.ops())
    for (const auto &k : op.kraus()) ks.push_back(k);
  return ks;
}

// tr_K[I_x(rho) (I_H tensor P)] by explicit index loops.
CMatrix oracle_j(const Operation &op, const CMatrix &rho, const CMatrix &p,
                 std::size_t dh, std::size_t dk) {
  const CMatrix lifted = oracle::kron(CMatrix::Identity(dh, dh), p);
  return oracle::ptrace_right(
      oracle::matmul(oracle::kraus_apply(op.kraus(), rho), lifted), dh, dk);
}

TEST(MeasurementModel, RejectsWrongShapes) {
  SplitMix64 rng(1);
  EXPECT_THROW(MeasurementModel(2, 3, random_instrument(2, 4, 2, rng),
                                Observable::trivial(3)),
               DimensionError);
  EXPECT_THROW(MeasurementModel(2, 2, random_instrument(2, 4, 2, rng),
                                Observable::trivial(3)),
               DimensionError);
}

TEST(MeasuredBiInstrument, MatchesPartialTraceOracle) {
  SplitMix64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Observable P = random_observable(2, 2, rng);
    const MeasurementModel m = random_model(2, 2, P, rng);
    const MapBiInstrument J = measured_bi_instrument(m);
    const State rho = random_state(2, rng);
    for (std::size_t x = 0; x < m.interaction.size(); ++x) {
      for (std::size_t y = 0; y < P.size(); ++y) {
        EXPECT_LE(max_abs_diff(qcond::apply(J(x, y), rho),
                               oracle_j(m.interaction[x], rho.matrix(),
                                        P[y].matrix(), 2, 2)),
                  1e-13);
      }
    }
    EXPECT_TRUE(is_trace_preserving(total_map(J.flatten())));
  }
}

TEST(MeasuredBiInstrument, TrivialProbeAndFirstMarginal) {
  SplitMix64 rng(3);
  const MeasurementModel m = random_model(2, 3, Observable::trivial(3), rng);
  const MapBiInstrument J = measured_bi_instrument(m);
  const MapInstrument red = reduced_instrument(m);
  const State rho = random_state(2, rng);
  for (std::size_t x = 0; x < m.interaction.size(); ++x) {
    EXPECT_LE(map_deviation(J(x, 0), red[x]), 1e-13);
    EXPECT_LE(max_abs_diff(qcond::apply(red[x], rho),
                           oracle::ptrace_right(
                               oracle::kraus_apply(m.interaction[x].kraus(),
                                                   rho.matrix()),
                               2, 3)),
              1e-13);
  }
  const MeasurementModel m2(m.dim_h, m.dim_k, m.interaction,
                            random_observable(3, 2, rng));
  EXPECT_LE(max_deviation(marginals(measured_bi_instrument(m2)).first, red), 1e-12);
}

TEST(MeasuredInstrument, TrivialProbeAndOracle) {
  SplitMix64 rng(4);
  const MeasurementModel m = random_model(2, 2, Observable::trivial(2), rng);
  const MapInstrument J2 = measured_instrument(m);
  ASSERT_EQ(J2.size(), 1u);
  const Channel total = total_channel(m.interaction);
  const State rho = random_state(2, rng);
  EXPECT_LE(max_abs_diff(qcond::apply(J2[0], rho),
                         oracle::ptrace_right(
                             oracle::kraus_apply(total.kraus(), rho.matrix()), 2, 2)),
            1e-13);

  const Observable P = random_observable(2, 3, rng);
  const MeasurementModel mp(2, 2, m.interaction, P);
  const MapInstrument J2p = measured_instrument(mp);
  double tr = 0.0;
  for (std::size_t y = 0; y < P.size(); ++y) {
    const CMatrix out = qcond::apply(J2p[y], rho);
    EXPECT_LE(max_abs_diff(out, oracle_j(total, rho.matrix(), P[y].matrix(), 2, 2)),
              1e-13);
    tr += trace(out).real();
  }
  EXPECT_NEAR(tr, 1.0, 1e-12);
  EXPECT_LE(max_deviation(J2p, marginals(measured_bi_instrument(mp)).second), 1e-12);
}

TEST(MeasuredBiObservable, ProbeIndependenceAndDuality) {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const MeasurementModel m = random_model(2, 2, random_observable(2, 2, rng), rng);
    const MeasurementModel m2(2, 2, m.interaction, random_observable(2, 3, rng));
    const BiObservable J = measured_bi_observable(m);
    const auto first = marginals(J).first;
    EXPECT_LE(max_deviation(first, marginals(measured_bi_observable(m2)).first), 1e-12);
    EXPECT_LE(max_deviation(first, measured_observable(m.interaction)), 1e-12);

    const MapBiInstrument Jmap = measured_bi_instrument(m);
    const State rho = random_state(2, rng);
    for (std::size_t i = 0; i < J.grid().size(); ++i) {
      EXPECT_NEAR(oracle::trace_product(rho.matrix(), J.grid()[i].matrix()).real(),
                  trace(qcond::apply(Jmap.grid()[i], rho)).real(), 1e-12);
    }
  }
}

TEST(MeasuredBiObservable, TrivialProbe) {
  SplitMix64 rng(6);
  const MeasurementModel m = random_model(3, 2, Observable::trivial(2), rng);
  const BiObservable J = measured_bi_observable(m);
  const Observable hat = measured_observable(m.interaction);
  for (std::size_t x = 0; x < hat.size(); ++x) {
    EXPECT_LE(max_abs_diff(J(x, 0).matrix(), hat[x].matrix()), 1e-12);
  }
}

TEST(PointerObservable, TrivialProbeAndKrausOracle) {
  SplitMix64 rng(7);
  const MeasurementModel m = random_model(2, 2, Observable::trivial(2), rng);
  EXPECT_LE(max_abs_diff(measured_pointer_observable(m)[0].matrix(), identity(2)),
            1e-12);
  for (int t = 0; t < 20; ++t) {
    const Observable P = random_observable(2, 3, rng);
    const MeasurementModel mp = random_model(2, 2, P, rng);
    const Observable ptr = measured_pointer_observable(mp);
    const auto ks = all_kraus(mp.interaction);
    for (std::size_t y = 0; y < P.size(); ++y) {
      const CMatrix lifted = oracle::kron(CMatrix::Identity(2, 2), P[y].matrix());
      EXPECT_LE(max_abs_diff(ptr[y].matrix(), oracle::kraus_dual(ks, lifted)), 1e-13);
    }
    EXPECT_LE(max_deviation(ptr, measured_observable(measured_instrument(mp))), 1e-12);
    EXPECT_LE(max_deviation(ptr, marginals(measured_bi_observable(mp)).second), 1e-12);
  }
}

TEST(KrausSeparable, AncillaAttachmentAndUnitDual) {
  SplitMix64 rng(8);
  const State anc = random_state(2, rng);
  const KrausSeparableChannel ks({identity(2)}, {anc});
  const Channel ch = kraus_separable_total(ks);
  const State rho = random_state(2, rng);
  EXPECT_LE(max_abs_diff(qcond::apply(ch, rho), oracle::kron(rho.matrix(), anc.matrix())),
            1e-12);
  EXPECT_LE(max_abs_diff(kraus_separable_dual(ks, identity(2), identity(2)),
                         identity(2)),
            1e-12);
}

TEST(KrausSeparable, ClosedFormsMatchGenericPipeline) {
  SplitMix64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(3);
    const Channel inner = random_channel(2, 2, n, rng);
    std::vector<State> rhos;
    for (std::size_t i = 0; i < n; ++i) rhos.push_back(random_state(2, rng));
    const KrausSeparableChannel ks(inner.kraus(), rhos);
    const Channel total = kraus_separable_total(ks);
    const State rho = random_state(2, rng);
    CMatrix want = zeros(4, 4);
    for (std::size_t i = 0; i < n; ++i) {
      want += oracle::kron(oracle::kraus_apply({inner.kraus()[i]}, rho.matrix()),
                           rhos[i].matrix());
    }
    EXPECT_LE(max_abs_diff(qcond::apply(total, rho), want), 1e-12);

    const Effect a = random_effect(2, rng);
    const Effect b = random_effect(2, rng);
    EXPECT_LE(max_abs_diff(kraus_separable_dual(ks, a.matrix(), b.matrix()),
                           oracle::kraus_dual(total.kraus(),
                                              oracle::kron(a.matrix(), b.matrix()))),
              1e-12);

    const Observable P = random_observable(2, 2, rng);
    const MeasurementModel m(2, 2, Instrument(OutcomeSpace({"1"}), {total}), P);
    EXPECT_LE(max_deviation(measured_instrument(m), kraus_separable_instrument(ks, P)),
              1e-9);
    EXPECT_LE(max_deviation(measured_pointer_observable(m),
                            kraus_separable_pointer(ks, P)),
              1e-9);
    const StochasticMatrix c = kraus_separable_coefficients(ks, P);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(c.weights().row(i).sum(), 1.0, 1e-12);
    }
  }
}

TEST(KrausSeparable, RejectsNonChannels) {
  try {
    KrausSeparableChannel({CMatrix(0.5 * identity(2))}, {State::maximally_mixed(2)});
    FAIL();
  } catch (const InvariantError &e) {
    EXPECT_EQ(e.invariant(), "normalization");
  }
}

TEST(SimpleKrausSeparable, AncillaPreparation) {
  const KrausSeparableChannel ks =
      simple_kraus_separable({identity(2)}, {CVector(oracle::ket(2, 0))});
  SplitMix64 rng(10);
  const State rho = random_state(2, rng);
  EXPECT_LE(max_abs_diff(qcond::apply(kraus_separable_total(ks), rho),
                         oracle::kron(rho.matrix(), oracle::proj(2, 0))),
            1e-12);
}

TEST(SimpleKrausSeparable, AdjointActionAndLiftedChannel) {
  SplitMix64 rng(11);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(3);
    const Channel inner = random_channel(2, 2, n, rng);
    std::vector<CVector> psis;
    for (std::size_t i = 0; i < n; ++i) psis.push_back(random_unit_vector(3, rng));
    const auto lifted = lifted_kraus(inner.kraus(), psis);
    const CVector phi1 = random_unit_vector(2, rng);
    const CVector phi2 = random_unit_vector(3, rng);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(max_abs_diff(lifted[i], oracle::kron(inner.kraus()[i], psis[i])),
                1e-15);
      const CMatrix lhs = oracle::matmul(oracle::adjoint(lifted[i]),
                                         oracle::kron(phi1, phi2));
      const Complex ip = oracle::matmul(oracle::adjoint(psis[i]), phi2)(0, 0);
      const CMatrix rhs = ip * oracle::matmul(oracle::adjoint(inner.kraus()[i]), phi1);
      EXPECT_LE(max_abs_diff(lhs, rhs), 1e-14);
    }
    EXPECT_LE(map_deviation(Channel(lifted),
                            kraus_separable_total(
                                simple_kraus_separable(inner.kraus(), psis))),
              1e-12);
  }
}

TEST(SimpleKrausSeparable, RejectsNonUnitVectors) {
  try {
    simple_kraus_separable({identity(2)}, {CVector(2.0 * oracle::ket(2, 0))});
    FAIL();
  } catch (const InvariantError &e) {
    EXPECT_EQ(e.invariant(), "unit-vector");
  }
}

HolevoSeparableSpec random_hs(std::size_t dh, std::size_t dk, std::size_t n,
                              SplitMix64 &rng) {
  std::vector<State> betas, gammas;
  Observable A = random_observable(dh, n, rng);
  for (std::size_t x = 0; x < n; ++x) {
    betas.push_back(random_state(dh, rng));
    gammas.push_back(random_state(dk, rng));
  }
  return HolevoSeparableSpec(A, betas, gammas);
}

TEST(HolevoSeparable, TrivialProbeAndIdenticalProbeStates) {
  SplitMix64 rng(12);
  const HolevoSeparableSpec s = random_hs(2, 2, 3, rng);
  const HolevoModelQuantities q = holevo_model_quantities(s, Observable::trivial(2));
  EXPECT_LE(max_abs_diff(q.pointer[0].matrix(), identity(2)), 1e-12);

  const State gamma = random_state(2, rng);
  const HolevoSeparableSpec same(s.A, s.betas, {gamma, gamma, gamma});
  const Observable P = random_observable(2, 2, rng);
  const HolevoModelQuantities q2 = holevo_model_quantities(same, P);
  for (std::size_t y = 0; y < P.size(); ++y) {
    const Complex c = oracle::trace_product(gamma.matrix(), P[y].matrix());
    EXPECT_LE(max_abs_diff(q2.pointer[y].matrix(), CMatrix(c * identity(2))), 1e-12);
  }
}

TEST(HolevoSeparable, SixQuantitiesMatchGenericPipeline) {
  SplitMix64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const HolevoSeparableSpec s = random_hs(2, 2, 3, rng);
    const Observable P = random_observable(2, 2, rng);
    const MeasurementModel m = holevo_separable_model(s, P);
    const HolevoModelQuantities q = holevo_model_quantities(s, P);
    const Effect a = random_effect(4, rng);
    for (std::size_t x = 0; x < 3; ++x) {
      const CMatrix ab = oracle::kron(s.betas[x].matrix(), s.gammas[x].matrix());
      const Complex w = oracle::trace_product(ab, a.matrix());
      EXPECT_LE(max_abs_diff(q.interaction_dual(x, a.matrix()),
                             CMatrix(w * s.A[x].matrix())),
                1e-12);
      EXPECT_LE(max_abs_diff(dual(m.interaction[x], a.matrix()),
                             q.interaction_dual(x, a.matrix())),
                1e-9);
    }
    EXPECT_LE(max_deviation(measured_bi_instrument(m), q.bi_instrument), 1e-9);
    EXPECT_LE(max_deviation(measured_instrument(m), q.instrument), 1e-9);
    EXPECT_LE(max_deviation(reduced_instrument(m), q.reduced), 1e-9);
    EXPECT_LE(max_deviation(measured_bi_observable(m), q.bi_observable), 1e-9);
    EXPECT_LE(max_deviation(measured_pointer_observable(m), q.pointer), 1e-9);
    EXPECT_LE(max_deviation(post_process(s.A, q.pointer_kernel), q.pointer), 1e-12);
    for (std::size_t x = 0; x < 3; ++x) {
      double row = 0.0;
      for (const auto &p : P.effects()) {
        row += oracle::trace_product(s.gammas[x].matrix(), p.matrix()).real();
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

}  // namespace
}  // namespace qcond
