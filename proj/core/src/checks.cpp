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

#include "qcond/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qcond/channels.hpp"
#include "qcond/effects.hpp"
#include "qcond/instruments.hpp"
#include "qcond/measmodel.hpp"

namespace qcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// helpers

std::vector<std::vector<std::string>> all_subsets(const OutcomeSpace &o) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = o.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(o.label(i));
    }
    out.push_back(std::move(s));
  }
  return out;
}

State as_state(const CMatrix &m) { return State(hermitian_part(m)); }

CMatrix pad(const CMatrix &m, std::size_t dim) {
  CMatrix out = zeros(dim, dim);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

Channel random_channel_d(std::size_t din, std::size_t dout, SplitMix64 &rng) {
  return random_channel(din, dout, 2, rng);
}

// ---------------------------------------------------------------------------
// post-processing composition

double postprocessing_composition(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Observable A = random_observable(d, 3, rng);
  const StochasticMatrix lam = random_stochastic(3, 4, rng);
  const StochasticMatrix mu = random_stochastic(4, 2, rng);
  return max_deviation(post_process(post_process(A, lam), mu),
                       post_process(A, then(lam, mu)));
}

double parts_composition(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Observable A = random_observable(d, 4, rng);
  const OutcomeMap f = random_surjection(A.outcomes(), 3, rng);
  const OutcomeMap g = random_surjection(f.targets(), 2, rng);
  return max_deviation(part(part(A, f), g), part(A, compose(g, f)));
}

// ---------------------------------------------------------------------------
// dual map

double dual_duality(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const State rho = random_state(d, rng);
  const Effect a = random_effect(d + 1, rng);
  const Complex lhs = trace_product(rho.matrix(), dual(ch, a.matrix()));
  const Complex rhs = trace_product(qcond::apply(ch, rho), a.matrix());
  return std::abs(lhs - rhs);
}

double dual_additivity(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const Observable A = random_observable(d + 1, 3, rng);
  const CMatrix a = A[0].matrix();
  const CMatrix b = A[1].matrix();
  return max_abs_diff(dual(ch, a + b), dual(ch, a) + dual(ch, b));
}

double dual_morphism_iff_channel(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const CMatrix id_out = identity(d + 1);
  const double channel_dev = max_abs_diff(dual(ch, id_out), identity(d));
  std::vector<CMatrix> scaled;
  for (const auto &k : ch.kraus()) scaled.push_back(0.9 * k);
  const Operation sub(scaled);
  const double sub_gap = max_abs_diff(dual(sub, id_out), identity(d));
  return std::max(channel_dev, std::max(0.0, 1e-2 - sub_gap));
}

double dual_contravariance(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel i = random_channel_d(d, d + 1, rng);
  const Channel j = random_channel_d(d + 1, d, rng);
  const Effect b = random_effect(d, rng);
  return max_abs_diff(dual(sequential_product(i, j), b.matrix()),
                      dual(i, dual(j, b.matrix())));
}

// ---------------------------------------------------------------------------
// conditioning

double conditioning_distribution(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const Observable B = random_observable(d + 1, 3, rng);
  const State rho = random_state(d, rng);
  const Observable BI = condition_observable(ch, B);
  const State out = as_state(qcond::apply(ch, rho));
  double dev = 0.0;
  for (const auto &s : all_subsets(B.outcomes())) {
    dev = std::max(dev, std::abs(observable_distribution(rho, BI, s) -
                                 observable_distribution(out, B, s)));
  }
  return dev;
}

double conditioning_affine(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const std::vector<double> w = random_weights(3, rng);
  CMatrix mix = zeros(d + 1, d + 1);
  CMatrix conditioned = zeros(d, d);
  for (std::size_t i = 0; i < 3; ++i) {
    const Effect b = random_effect(d + 1, rng);
    mix += w[i] * b.matrix();
    conditioned += w[i] * condition_effect(ch, b).matrix();
  }
  return max_abs_diff(condition_effect(ch, Effect(hermitian_part(mix))).matrix(),
                      conditioned);
}

double conditioning_unitary_inverse(std::size_t d, SplitMix64 &rng, Tolerance) {
  const CMatrix u = random_unitary(d, rng);
  const Channel ch = Channel::unitary(u);
  const Effect a = random_effect(d, rng);
  const Effect moved(hermitian_part(u * a.matrix() * u.adjoint()));
  return max_abs_diff(condition_effect(ch, moved).matrix(), a.matrix());
}

// ---------------------------------------------------------------------------
// completion of sub-normalized families

double completion_conditioning(std::size_t d, SplitMix64 &rng, Tolerance) {
  double dev = 0.0;

  // Generic family: B must always come out a valid observable.
  {
    const Channel ch = random_channel_d(d, d + 1, rng);
    const Observable A = random_observable(d + 1, 4, rng);
    const double s = 0.5 + 0.5 * rng.uniform();
    std::vector<Effect> bs;
    for (std::size_t x = 0; x < 3; ++x) bs.emplace_back(s * A[x].matrix());
    const Observable B = complete_subnormalized(ch, bs);
    CMatrix total = zeros(d + 1, d + 1);
    for (const auto &e : B.effects()) total += e.matrix();
    dev = std::max(dev, max_abs_diff(total, identity(d + 1)));
  }

  // Residual supported on a direction every Kraus operator avoids: its
  // dual vanishes and conditioning is reproduced exactly.
  {
    const CMatrix w = random_unitary(d + 1, rng);
    const Channel inner = random_channel_d(d, d, rng);
    std::vector<CMatrix> ks;
    for (const auto &k : inner.kraus()) {
      CMatrix padded = zeros(d + 1, d);
      padded.topRows(d) = k;
      ks.push_back(w * padded);
    }
    const Channel ch(ks);
    const Observable A = random_observable(d, 3, rng);
    std::vector<Effect> bs;
    for (const auto &e : A.effects()) {
      bs.emplace_back(hermitian_part(w * pad(e.matrix(), d + 1) * w.adjoint()));
    }
    const Observable B = complete_subnormalized(ch, bs);
    for (std::size_t x = 0; x < bs.size(); ++x) {
      dev = std::max(dev, max_abs_diff(condition_effect(ch, B[x]).matrix(),
                                       condition_effect(ch, bs[x]).matrix()));
    }
  }
  return dev;
}

// ---------------------------------------------------------------------------
// given observable

double given_marginals(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Instrument ins = random_instrument(d, d + 1, 3, rng);
  const Observable B = random_observable(d + 1, 2, rng);
  const auto [m1, m2] = marginals(given_observable(B, ins));
  return std::max(max_deviation(m1, measured_observable(ins)),
                  max_deviation(m2, condition_observable(total_channel(ins), B)));
}

double given_factored_distribution(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Instrument ins = random_instrument(d, d + 1, 3, rng);
  const Observable B = random_observable(d + 1, 3, rng);
  const State rho = random_state(d, rng);
  const Observable joint = given_observable(B, ins).flatten();
  const OutcomeSpace labels = OutcomeSpace::product(ins.outcomes(), B.outcomes());

  std::vector<CMatrix> outs;
  for (const auto &op : ins.ops()) outs.push_back(qcond::apply(op, rho));

  double dev = 0.0;
  for (const auto &s1 : all_subsets(ins.outcomes())) {
    for (const auto &s2 : all_subsets(B.outcomes())) {
      double sum = 0.0;
      std::vector<std::string> pairs;
      for (const auto &x : s1) {
        for (const auto &y : s2) {
          sum += trace_product(outs[ins.outcomes().index_of(x)],
                               B.effect(y).matrix()).real();
          pairs.push_back(labels.label(ins.outcomes().index_of(x) * B.size() +
                                       B.outcomes().index_of(y)));
        }
      }
      const double factored = given_distribution(B, ins, rho, s1, s2);
      dev = std::max(dev, std::abs(factored - sum));
      dev = std::max(dev,
                     std::abs(observable_distribution(rho, joint, pairs) - sum));
    }
  }
  return dev;
}

// ---------------------------------------------------------------------------
// closure of conditioning

double closure_post_processing(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const Observable A = random_observable(d + 1, 3, rng);
  const StochasticMatrix lam = random_stochastic(3, 2, rng);
  return max_deviation(condition_observable(ch, post_process(A, lam)),
                       post_process(condition_observable(ch, A), lam));
}

double closure_parts(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const Observable C = random_observable(d + 1, 4, rng);
  const OutcomeMap f = random_surjection(C.outcomes(), 2, rng);
  return max_deviation(part(condition_observable(ch, C), f),
                       condition_observable(ch, part(C, f)));
}

double closure_affine(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  std::vector<Observable> As;
  std::vector<Observable> conditioned;
  for (int i = 0; i < 3; ++i) {
    As.push_back(random_observable(d + 1, 3, rng));
    conditioned.push_back(condition_observable(ch, As.back()));
  }
  const std::vector<double> w = random_weights(3, rng);
  return max_deviation(condition_observable(ch, affine_combination(As, w)),
                       affine_combination(conditioned, w));
}

// ---------------------------------------------------------------------------
// instrument conditioning

double instrument_conditioned_observable(std::size_t d, SplitMix64 &rng,
                                         Tolerance) {
  const Channel ch = random_channel_d(d, d + 1, rng);
  const Instrument jns = random_instrument(d + 1, d, 3, rng);
  return max_deviation(measured_observable(condition_instrument(ch, jns)),
                       condition_observable(ch, measured_observable(jns)));
}

double instrument_given_marginals(std::size_t d, SplitMix64 &rng, Tolerance) {
  const Instrument ins = random_instrument(d, d + 1, 2, rng);
  const Instrument jns = random_instrument(d + 1, d, 2, rng);
  const auto [m1, m2] = marginals(given_instrument(ins, jns));
  const Channel jbar = total_channel(jns);
  double dev = max_deviation(m2, condition_instrument(total_channel(ins), jns));
  for (std::size_t x = 0; x < ins.size(); ++x) {
    dev = std::max(dev, map_deviation(m1[x], sequential_product(ins[x], jbar)));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Holevo instruments

HolevoSpec random_holevo(std::size_t din, std::size_t dout, std::size_t n,
                         SplitMix64 &rng) {
  Observable A = random_observable(din, n, rng);
  std::vector<State> alphas;
  for (std::size_t x = 0; x < n; ++x) alphas.push_back(random_state(dout, rng));
  return HolevoSpec(std::move(A), std::move(alphas));
}

double holevo_dual_formula(std::size_t d, SplitMix64 &rng, Tolerance) {
  const HolevoSpec spec = random_holevo(d, d + 1, 3, rng);
  const Instrument h = holevo_instrument(spec);
  const Effect b = random_effect(d + 1, rng);
  const State rho = random_state(d, rng);
  double dev = max_deviation(measured_observable(h), spec.A);
  for (std::size_t x = 0; x < h.size(); ++x) {
    dev = std::max(dev, max_abs_diff(dual(h[x], b.matrix()),
                                     holevo_dual(spec, x, b.matrix())));
    const CMatrix expected =
        trace_product(rho.matrix(), spec.A[x].matrix()) * spec.alphas[x].matrix();
    dev = std::max(dev, max_abs_diff(qcond::apply(h[x], rho), expected));
  }
  return dev;
}

double holevo_composition(std::size_t d, SplitMix64 &rng, Tolerance) {
  const HolevoSpec hA = random_holevo(d, d + 1, 2, rng);
  const HolevoSpec hB = random_holevo(d + 1, d, 3, rng);
  return max_deviation(
      given_instrument(holevo_instrument(hA), holevo_instrument(hB)),
      holevo_compose(hB, hA));
}

double holevo_marginal_formulas(std::size_t d, SplitMix64 &rng, Tolerance) {
  const HolevoSpec hA = random_holevo(d, d + 1, 2, rng);
  const HolevoSpec hB = random_holevo(d + 1, d, 3, rng);
  const auto [m1, m2] = marginals(holevo_compose(hB, hA));
  const std::size_t nx = hA.A.size();
  const std::size_t ny = hB.A.size();
  double dev = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const auto printed = LinearMap::from_action(d, d, [&](const CMatrix &e) {
      CMatrix out = zeros(d, d);
      for (std::size_t y = 0; y < ny; ++y) {
        out += trace_product(hA.alphas[x].matrix(), hB.A[y].matrix()) *
               hB.alphas[y].matrix();
      }
      return CMatrix(trace_product(e, hA.A[x].matrix()) * out);
    });
    dev = std::max(dev, map_deviation(m1[x], printed));
  }
  for (std::size_t y = 0; y < ny; ++y) {
    const auto printed = LinearMap::from_action(d, d, [&](const CMatrix &e) {
      Complex c = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        c += trace_product(e, hA.A[x].matrix()) *
             trace_product(hA.alphas[x].matrix(), hB.A[y].matrix());
      }
      return CMatrix(c * hB.alphas[y].matrix());
    });
    dev = std::max(dev, map_deviation(m2[y], printed));
  }
  dev = std::max(dev, max_deviation(m2, condition_instrument(
                                            total_channel(holevo_instrument(hA)),
                                            holevo_instrument(hB))));
  return dev;
}

// ---------------------------------------------------------------------------
// measurement models

MeasurementModel random_model(std::size_t d, const Observable &probe,
                              SplitMix64 &rng) {
  return MeasurementModel(d, probe.dim(),
                          random_instrument(d, d * probe.dim(), 2, rng), probe);
}

double model_pointer(std::size_t d, SplitMix64 &rng, Tolerance) {
  const MeasurementModel m = random_model(d, random_observable(2, 2, rng), rng);
  const Observable pointer = measured_pointer_observable(m);
  return std::max(
      max_deviation(pointer, measured_observable(measured_instrument(m))),
      max_deviation(pointer, marginals(measured_bi_observable(m)).second));
}

double model_probe_independence(std::size_t d, SplitMix64 &rng, Tolerance) {
  const MeasurementModel m = random_model(d, random_observable(2, 2, rng), rng);
  const MeasurementModel m2(m.dim_h, m.dim_k, m.interaction,
                            random_observable(2, 3, rng));
  const Observable first = marginals(measured_bi_observable(m)).first;
  double dev = max_deviation(first, marginals(measured_bi_observable(m2)).first);
  dev = std::max(dev, max_deviation(first, measured_observable(m.interaction)));
  const auto [j1, j2] = marginals(measured_bi_instrument(m));
  dev = std::max(dev, max_deviation(j1, reduced_instrument(m)));
  dev = std::max(dev, max_deviation(j1, reduced_instrument(m2)));
  dev = std::max(dev, max_deviation(j2, measured_instrument(m)));
  return dev;
}

double model_bi_observable_duality(std::size_t d, SplitMix64 &rng, Tolerance) {
  const MeasurementModel m = random_model(d, random_observable(2, 3, rng), rng);
  const State rho = random_state(d, rng);
  const BiObservable jhat = measured_bi_observable(m);
  const MapBiInstrument j = measured_bi_instrument(m);
  double dev = 0.0;
  for (std::size_t i = 0; i < j.grid().size(); ++i) {
    const Complex lhs = trace_product(rho.matrix(), jhat.grid()[i].matrix());
    const Complex rhs = trace(qcond::apply(j.grid()[i], rho));
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Kraus-separable models

double kraus_separable_formulas(std::size_t d, SplitMix64 &rng, Tolerance) {
  const std::size_t dk = 2;
  const std::size_t n = 1 + rng.below(3);
  const Channel inner = random_channel(d, d, n, rng);
  std::vector<State> rhos;
  for (std::size_t i = 0; i < n; ++i) rhos.push_back(random_state(dk, rng));
  const KrausSeparableChannel ks(inner.kraus(), rhos);
  const Observable probe = random_observable(dk, 3, rng);
  const Channel total = kraus_separable_total(ks);
  const MeasurementModel m(d, dk, Instrument(OutcomeSpace({"1"}), {total}),
                           probe);

  const Effect a = random_effect(d, rng);
  const Effect b = random_effect(dk, rng);
  double dev = max_abs_diff(dual(total, kron(a.matrix(), b.matrix())),
                            kraus_separable_dual(ks, a.matrix(), b.matrix()));
  dev = std::max(dev, max_deviation(measured_instrument(m),
                                    kraus_separable_instrument(ks, probe)));
  dev = std::max(dev, max_deviation(measured_pointer_observable(m),
                                    kraus_separable_pointer(ks, probe)));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (const auto &p : probe.effects()) {
      row += trace_product(rhos[i].matrix(), p.matrix()).real();
    }
    dev = std::max(dev, std::abs(row - 1.0));
  }
  return dev;
}

double kraus_separable_simple(std::size_t d, SplitMix64 &rng, Tolerance) {
  const std::size_t dk = 2;
  const std::size_t n = 1 + rng.below(3);
  const Channel inner = random_channel(d, d, n, rng);
  std::vector<CVector> psis;
  for (std::size_t i = 0; i < n; ++i) psis.push_back(random_unit_vector(dk, rng));
  const std::vector<CMatrix> lifted = lifted_kraus(inner.kraus(), psis);
  double dev = map_deviation(
      Channel(lifted), kraus_separable_total(simple_kraus_separable(inner.kraus(), psis)));
  const CVector phi1 = random_unit_vector(d, rng);
  const CVector phi2 = random_unit_vector(dk, rng);
  const CMatrix both = kron(phi1, phi2);
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix lhs = lifted[i].adjoint() * both;
    const CMatrix rhs = psis[i].dot(phi2) * (inner.kraus()[i].adjoint() * phi1);
    dev = std::max(dev, max_abs_diff(lhs, rhs));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Holevo-separable models

double holevo_separable_formulas(std::size_t d, SplitMix64 &rng, Tolerance) {
  const std::size_t dk = 2;
  const std::size_t n = 3;
  Observable A = random_observable(d, n, rng);
  std::vector<State> betas;
  std::vector<State> gammas;
  for (std::size_t x = 0; x < n; ++x) {
    betas.push_back(random_state(d, rng));
    gammas.push_back(random_state(dk, rng));
  }
  const HolevoSeparableSpec spec(A, betas, gammas);
  const Observable probe = random_observable(dk, 2, rng);
  const MeasurementModel m = holevo_separable_model(spec, probe);
  const HolevoModelQuantities q = holevo_model_quantities(spec, probe);

  const Effect a = random_effect(d * dk, rng);
  double dev = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    dev = std::max(dev, max_abs_diff(dual(m.interaction[x], a.matrix()),
                                     q.interaction_dual(x, a.matrix())));
  }
  dev = std::max(dev, max_deviation(measured_bi_instrument(m), q.bi_instrument));
  dev = std::max(dev, max_deviation(measured_instrument(m), q.instrument));
  dev = std::max(dev, max_deviation(reduced_instrument(m), q.reduced));
  dev = std::max(dev, max_deviation(measured_bi_observable(m), q.bi_observable));
  dev = std::max(dev, max_deviation(measured_pointer_observable(m), q.pointer));
  dev = std::max(dev, max_deviation(post_process(A, q.pointer_kernel), q.pointer));
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (const auto &p : probe.effects()) {
      row += trace_product(gammas[x].matrix(), p.matrix()).real();
    }
    dev = std::max(dev, std::abs(row - 1.0));
  }
  return dev;
}

// ---------------------------------------------------------------------------

std::vector<Identity> build_registry() {
  std::vector<Identity> r = {
      {"postprocessing.composition", "post-processing composition",
       "post(post(A, lam), mu) == post(A, lam then mu)",
       postprocessing_composition, 1e-12},
      {"parts.composition", "post-processing composition",
       "part(part(A, f), g) == part(A, g o f)", parts_composition, 1e-12},
      {"dual.duality", "dual map", "tr[rho I*(a)] == tr[I(rho) a]",
       dual_duality, std::nullopt},
      {"dual.additivity", "dual map", "I*(a + b) == I*(a) + I*(b)",
       dual_additivity, std::nullopt},
      {"dual.morphism_iff_channel", "dual map",
       "I*(I) == I for channels; scaled Kraus miss it by >= 1e-2",
       dual_morphism_iff_channel, std::nullopt},
      {"dual.contravariance", "sequential product",
       "(I then J)* == I* o J*", dual_contravariance, std::nullopt},
      {"conditioning.distribution", "conditioning",
       "distribution of (B|I) in rho == distribution of B in I(rho)",
       conditioning_distribution, std::nullopt},
      {"conditioning.affine", "conditioning",
       "(sum w_i b_i | I) == sum w_i (b_i | I)", conditioning_affine,
       std::nullopt},
      {"conditioning.unitary_inverse", "conditioning",
       "(U a U^dagger | U) == a", conditioning_unitary_inverse, std::nullopt},
      {"completion.conditioning", "observable completion",
       "completion is an observable; conditioning kept when I*(C) == 0",
       completion_conditioning, std::nullopt},
      {"given.marginals", "given observable",
       "(B||I) marginals are the measured observable and (B|Ibar)",
       given_marginals, std::nullopt},
      {"given.factored_distribution", "given observable",
       "factored distribution == double sum over all subset pairs",
       given_factored_distribution, std::nullopt},
      {"closure.post_processing", "conditioning closure",
       "(post(A, lam) | I) == post((A|I), lam)", closure_post_processing,
       std::nullopt},
      {"closure.parts", "conditioning closure", "(C|I)_f == (C_f | I)",
       closure_parts, std::nullopt},
      {"closure.affine", "conditioning closure",
       "(sum w_i A_i | I) == sum w_i (A_i | I)", closure_affine, std::nullopt},
      {"instrument.conditioned_observable", "instrument conditioning",
       "measured observable of (J|I) == (Jhat|I)",
       instrument_conditioned_observable, std::nullopt},
      {"instrument.given_marginals", "instrument conditioning",
       "(J||I) marginals are I_x then Jbar and (J|Ibar)",
       instrument_given_marginals, std::nullopt},
      {"holevo.dual", "Holevo composition",
       "Holevo dual, action and measured observable formulas",
       holevo_dual_formula, std::nullopt},
      {"holevo.composition", "Holevo composition",
       "(H^B || H^A) == H^(C, delta)", holevo_composition, std::nullopt},
      {"holevo.marginal_formulas", "Holevo composition",
       "closed-form marginals of the composed Holevo instrument",
       holevo_marginal_formulas, std::nullopt},
      {"model.pointer_is_measured_effect", "measurement model",
       "Jhat2 == measured observable of J2 == second marginal of Jhat",
       model_pointer, std::nullopt},
      {"model.probe_independence", "measurement model",
       "first marginals do not depend on the probe",
       model_probe_independence, std::nullopt},
      {"model.bi_observable_duality", "measurement model",
       "tr(rho Jhat_xy) == tr J_xy(rho)", model_bi_observable_duality,
       std::nullopt},
      {"kraus_separable.formulas", "Kraus-separable model",
       "closed-form dual, measured instrument and pointer observable",
       kraus_separable_formulas, std::nullopt},
      {"kraus_separable.simple_construction", "Kraus-separable model",
       "K_i = A_i tensor |psi_i> is Kraus-separable with pure probe states",
       kraus_separable_simple, std::nullopt},
      {"holevo_separable.formulas", "Holevo-separable model",
       "closed-form interaction dual, J, J2, J1, Jhat and Jhat2",
       holevo_separable_formulas, std::nullopt},
  };
  std::sort(r.begin(), r.end(),
            [](const Identity &a, const Identity &b) { return a.name < b.name; });
  return r;
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

const std::vector<Identity> &registered_identities() {
  static const std::vector<Identity> registry = build_registry();
  return registry;
}

const Identity &find_identity(const std::string &name) {
  for (const auto &id : registered_identities()) {
    if (id.name == name) return id;
  }
  throw UnknownIdentity(name);
}

bool CheckReport::all_passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord &r) { return r.passed; });
}

CheckReport run_checks(const CheckOptions &opts) {
  if (opts.dim_min == 0 || opts.dim_min > opts.dim_max) {
    throw DimensionError("run_checks: need 1 <= dim_min <= dim_max");
  }
  std::set<std::string> names;
  for (const auto &s : opts.suite) {
    if (s == "all") {
      for (const auto &id : registered_identities()) names.insert(id.name);
    } else {
      names.insert(find_identity(s).name);
    }
  }

  CheckReport report;
  report.options = opts;
  if (opts.trials == 0) return report;

  std::vector<const Identity *> ids;
  for (const auto &n : names) ids.push_back(&find_identity(n));

  const std::size_t ndims = opts.dim_max - opts.dim_min + 1;
  const std::size_t per_id = ndims * opts.trials;
  const std::size_t total = ids.size() * per_id;

  struct Slot {
    double dev = 0.0;
    std::string error;
    double ms = 0.0;
  };
  std::vector<Slot> slots(total);

  const SplitMix64 root(opts.seed);
  auto run_one = [&](std::size_t k) {
    const Identity &id = *ids[k / per_id];
    const std::size_t rem = k % per_id;
    const std::size_t dim = opts.dim_min + rem / opts.trials;
    const std::size_t trial = rem % opts.trials;
    SplitMix64 rng =
        root.split(stream_id(id.name.c_str())).split(dim).split(trial);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      slots[k].dev = id.run(dim, rng, opts.tol);
      if (std::isnan(slots[k].dev)) slots[k].dev = kInf;
    } catch (const std::exception &e) {
      slots[k].dev = kInf;
      slots[k].error = e.what();
    }
    slots[k].ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  };

  unsigned threads = opts.threads ? opts.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    for (std::size_t k = 0; k < total; ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < total; k = next++) run_one(k);
      });
    }
    for (auto &th : pool) th.join();
  }

  for (std::size_t i = 0; i < ids.size(); ++i) {
    CheckRecord rec;
    rec.name = ids[i]->name;
    rec.anchor = ids[i]->anchor;
    rec.instances = per_id;
    rec.tolerance = ids[i]->bound ? std::min(opts.tol.atol, *ids[i]->bound)
                                  : opts.tol.atol;
    for (std::size_t j = 0; j < per_id; ++j) {
      const Slot &s = slots[i * per_id + j];
      rec.max_deviation = std::max(rec.max_deviation, s.dev);
      rec.elapsed_ms += s.ms;
      if (rec.error.empty() && !s.error.empty()) rec.error = s.error;
    }
    rec.passed = rec.max_deviation <= rec.tolerance;
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string report_json(const CheckReport &r, bool include_timing) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["suite"] = r.options.suite;
  j["trials"] = r.options.trials;
  j["dims"] = {r.options.dim_min, r.options.dim_max};
  j["seed"] = r.options.seed;
  j["tolerance"] = r.options.tol.atol;
  j["passed"] = r.all_passed();
  ordered_json recs = ordered_json::array();
  for (const auto &rec : r.records) {
    ordered_json e;
    e["name"] = rec.name;
    e["anchor"] = rec.anchor;
    e["instances"] = rec.instances;
    if (std::isinf(rec.max_deviation)) {
      e["max_deviation"] = nullptr;
    } else {
      e["max_deviation"] = rec.max_deviation;
    }
    e["tolerance"] = rec.tolerance;
    e["passed"] = rec.passed;
    if (!rec.error.empty()) e["error"] = rec.error;
    if (include_timing) e["elapsed_ms"] = rec.elapsed_ms;
    recs.push_back(std::move(e));
  }
  j["identities"] = std::move(recs);
  return j.dump(2) + "\n";
}

std::string report_text(const CheckReport &r, bool include_timing) {
  std::size_t wname = 8;
  std::size_t wanchor = 6;
  for (const auto &rec : r.records) {
    wname = std::max(wname, rec.name.size());
    wanchor = std::max(wanchor, rec.anchor.size());
  }
  std::ostringstream out;
  auto cell = [&](const std::string &s, std::size_t w) {
    out << s << std::string(w > s.size() ? w - s.size() : 0, ' ') << "  ";
  };
  cell("identity", wname);
  cell("anchor", wanchor);
  cell("n", 6);
  cell("max dev", 10);
  cell("tol", 10);
  out << "result";
  if (include_timing) out << "  ms";
  out << "\n";
  for (const auto &rec : r.records) {
    cell(rec.name, wname);
    cell(rec.anchor, wanchor);
    cell(std::to_string(rec.instances), 6);
    cell(format_double(rec.max_deviation), 10);
    cell(format_double(rec.tolerance), 10);
    out << (rec.passed ? "PASS" : "FAIL");
    if (include_timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "    %.1f", rec.elapsed_ms);
      out << buf;
    }
    if (!rec.error.empty()) out << "  (" << rec.error << ")";
    out << "\n";
  }
  std::size_t failed = 0;
  for (const auto &rec : r.records) failed += rec.passed ? 0 : 1;
  out << r.records.size() << " identities, " << failed << " failed\n";
  return out.str();
}

}  // namespace qcond
