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

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qcond/channels.hpp"
#include "qcond/effects.hpp"

namespace qcond {

/**
 * Labelled family of operations whose sum is trace preserving.
 *
 * `Op` is either Operation (Kraus form) or LinearMap (evaluated form, used
 * for instruments extracted from measurement models).
 */
template <class Op>
class InstrumentOf {
 public:
  InstrumentOf(OutcomeSpace outcomes, std::vector<Op> ops, Tolerance tol = {});

  const OutcomeSpace &outcomes() const { return outcomes_; }
  const std::vector<Op> &ops() const { return ops_; }
  const Op &operator[](std::size_t i) const { return ops_.at(i); }
  const Op &op(const std::string &label) const {
    return ops_[outcomes_.index_of(label)];
  }
  std::size_t size() const { return ops_.size(); }
  std::size_t dim_in() const { return ops_.front().dim_in(); }
  std::size_t dim_out() const { return ops_.front().dim_out(); }

 private:
  OutcomeSpace outcomes_;
  std::vector<Op> ops_;
};

/// Instrument on a product outcome space, stored as a row-major grid.
template <class Op>
class BiInstrumentOf {
 public:
  BiInstrumentOf(OutcomeSpace first, OutcomeSpace second, std::vector<Op> grid,
                 Tolerance tol = {});

  const OutcomeSpace &first() const { return first_; }
  const OutcomeSpace &second() const { return second_; }
  const Op &operator()(std::size_t x, std::size_t y) const {
    return grid_.at(x * second_.size() + y);
  }
  const std::vector<Op> &grid() const { return grid_; }
  std::size_t dim_in() const { return grid_.front().dim_in(); }
  std::size_t dim_out() const { return grid_.front().dim_out(); }

  /// Same operations as a plain instrument on labels "x⊗y".
  InstrumentOf<Op> flatten(Tolerance tol = {}) const;

 private:
  OutcomeSpace first_;
  OutcomeSpace second_;
  std::vector<Op> grid_;
};

using Instrument = InstrumentOf<Operation>;
using BiInstrument = BiInstrumentOf<Operation>;
using MapInstrument = InstrumentOf<LinearMap>;
using MapBiInstrument = BiInstrumentOf<LinearMap>;

extern template class InstrumentOf<Operation>;
extern template class InstrumentOf<LinearMap>;
extern template class BiInstrumentOf<Operation>;
extern template class BiInstrumentOf<LinearMap>;

/// Sum of all operations of the instrument.
Channel total_channel(const Instrument &ins, Tolerance tol = {});
LinearMap total_map(const MapInstrument &ins, Tolerance tol = {});

/// Observable with tr(rho M_x) = tr[ins_x(rho)].
Observable measured_observable(const Instrument &ins, Tolerance tol = {});
Observable measured_observable(const MapInstrument &ins, Tolerance tol = {});

/// ins_x(rho) / tr[ins_x(rho)]; throws OutcomeNotObserved when the
/// probability is <= atol.
State updated_state(const Instrument &ins, const std::string &x,
                    const State &rho, Tolerance tol = {});
State updated_state(const MapInstrument &ins, const std::string &x,
                    const State &rho, Tolerance tol = {});

template <class Op>
std::pair<InstrumentOf<Op>, InstrumentOf<Op>> marginals(
    const BiInstrumentOf<Op> &bi, Tolerance tol = {});

/// "B given I": the bi-observable with entries ins_x^*(B_y), labels
/// (ins outcomes, B outcomes).
BiObservable given_observable(const Observable &B, const Instrument &ins,
                              Tolerance tol = {});

/**
 * Probability of first-outcome set `set1` and second-outcome set `set2`
 * for B given ins, evaluated in factored form:
 * tr[ins_{set1}(rho)] times the set2-probability of B in the normalized
 * updated state. Returns 0 when tr[ins_{set1}(rho)] <= atol.
 */
double given_distribution(const Observable &B, const Instrument &ins,
                          const State &rho,
                          const std::vector<std::string> &set1,
                          const std::vector<std::string> &set2,
                          Tolerance tol = {});

/// (jns|ch)_y = ch then jns_y
Instrument condition_instrument(const Channel &ch, const Instrument &jns,
                                Tolerance tol = {});

/// (jns||ins)_xy = ins_x then jns_y, labels (ins outcomes, jns outcomes).
BiInstrument given_instrument(const Instrument &ins, const Instrument &jns,
                              Tolerance tol = {});

/// Observable A on the input space plus one prepared output state per
/// outcome of A.
struct HolevoSpec {
  HolevoSpec(Observable A, std::vector<State> alphas);

  Observable A;
  std::vector<State> alphas;

  std::size_t dim_in() const { return A.dim(); }
  std::size_t dim_out() const { return alphas.front().dim(); }
};

/// Kraus form of rho -> tr(rho a) alpha: with a = sum_j a_j |u_j><u_j| and
/// alpha = sum_k p_k |v_k><v_k|, the operators sqrt(a_j p_k) |v_k><u_j|.
Operation holevo_operation(const Effect &a, const State &alpha,
                           Tolerance tol = {});

/// x -> (rho -> tr(rho A_x) alpha_x)
Instrument holevo_instrument(const HolevoSpec &spec, Tolerance tol = {});

/// Closed form of the dual: b -> tr(alpha_x b) A_x.
CMatrix holevo_dual(const HolevoSpec &spec, std::size_t x, const CMatrix &b);

/**
 * Holevo data of "hA then hB": C_xy = tr(alpha_x B_y) A_x on labels "x⊗y",
 * delta_xy = beta_y.
 */
HolevoSpec holevo_compose_spec(const HolevoSpec &hB, const HolevoSpec &hA,
                               Tolerance tol = {});

/// The bi-instrument built from holevo_compose_spec, labelled
/// (hA outcomes, hB outcomes).
BiInstrument holevo_compose(const HolevoSpec &hB, const HolevoSpec &hA,
                            Tolerance tol = {});

/// Largest map deviation over matching operations; +inf when the outcome
/// spaces or shapes differ.
template <class A, class B>
double max_deviation(const InstrumentOf<A> &a, const InstrumentOf<B> &b) {
  if (!(a.outcomes() == b.outcomes())) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, map_deviation(a[i], b[i]));
  }
  return dev;
}

template <class A, class B>
double max_deviation(const BiInstrumentOf<A> &a, const BiInstrumentOf<B> &b) {
  if (!(a.first() == b.first()) || !(a.second() == b.second())) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    dev = std::max(dev, map_deviation(a.grid()[i], b.grid()[i]));
  }
  return dev;
}

double max_deviation(const BiObservable &a, const BiObservable &b);

}  // namespace qcond
