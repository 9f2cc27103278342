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

#include "qcond/instruments.hpp"

#include <cmath>

#include "qcond/errors.hpp"

namespace qcond {

namespace {

template <class Op>
void check_instrument(const std::vector<Op> &ops, Tolerance tol,
                      const char *what) {
  if (ops.empty()) {
    throw InvariantError("nonempty", std::string(what) + " has no outcomes");
  }
  const std::size_t din = ops.front().dim_in();
  const std::size_t dout = ops.front().dim_out();
  CMatrix total = zeros(din, din);
  for (const auto &op : ops) {
    if (op.dim_in() != din || op.dim_out() != dout) {
      throw InvariantError("shape",
                           std::string(what) + " mixes operation shapes");
    }
    total += dual(op, identity(dout));
  }
  const double dev = max_abs_diff(total, identity(din));
  if (dev > tol.atol) {
    throw InvariantError("trace-preserving",
                         std::string(what) + " total is not a channel (off by " +
                             std::to_string(dev) + ")");
  }
}

}  // namespace

template <class Op>
InstrumentOf<Op>::InstrumentOf(OutcomeSpace outcomes, std::vector<Op> ops,
                               Tolerance tol)
    : outcomes_(std::move(outcomes)), ops_(std::move(ops)) {
  if (outcomes_.size() != ops_.size()) {
    throw InvariantError("labels",
                         "instrument label count does not match operations");
  }
  check_instrument(ops_, tol, "instrument");
}

template <class Op>
BiInstrumentOf<Op>::BiInstrumentOf(OutcomeSpace first, OutcomeSpace second,
                                   std::vector<Op> grid, Tolerance tol)
    : first_(std::move(first)),
      second_(std::move(second)),
      grid_(std::move(grid)) {
  if (grid_.size() != first_.size() * second_.size()) {
    throw InvariantError("labels", "bi-instrument grid size does not match "
                                   "its outcome spaces");
  }
  check_instrument(grid_, tol, "bi-instrument");
}

template <class Op>
InstrumentOf<Op> BiInstrumentOf<Op>::flatten(Tolerance tol) const {
  return InstrumentOf<Op>(OutcomeSpace::product(first_, second_), grid_, tol);
}

template class InstrumentOf<Operation>;
template class InstrumentOf<LinearMap>;
template class BiInstrumentOf<Operation>;
template class BiInstrumentOf<LinearMap>;

template <class Op>
std::pair<InstrumentOf<Op>, InstrumentOf<Op>> marginals(
    const BiInstrumentOf<Op> &bi, Tolerance tol) {
  const std::size_t n1 = bi.first().size();
  const std::size_t n2 = bi.second().size();
  std::vector<Op> m1;
  std::vector<Op> m2;
  for (std::size_t x = 0; x < n1; ++x) {
    Op acc = bi(x, 0);
    for (std::size_t y = 1; y < n2; ++y) acc = add(acc, bi(x, y), tol);
    m1.push_back(std::move(acc));
  }
  for (std::size_t y = 0; y < n2; ++y) {
    Op acc = bi(0, y);
    for (std::size_t x = 1; x < n1; ++x) acc = add(acc, bi(x, y), tol);
    m2.push_back(std::move(acc));
  }
  return {InstrumentOf<Op>(bi.first(), std::move(m1), tol),
          InstrumentOf<Op>(bi.second(), std::move(m2), tol)};
}

template std::pair<Instrument, Instrument> marginals(const BiInstrument &,
                                                     Tolerance);
template std::pair<MapInstrument, MapInstrument> marginals(
    const MapBiInstrument &, Tolerance);

Channel total_channel(const Instrument &ins, Tolerance tol) {
  std::vector<CMatrix> kraus;
  for (const auto &op : ins.ops()) {
    kraus.insert(kraus.end(), op.kraus().begin(), op.kraus().end());
  }
  return Channel(std::move(kraus), tol);
}

LinearMap total_map(const MapInstrument &ins, Tolerance tol) {
  LinearMap acc = ins[0];
  for (std::size_t x = 1; x < ins.size(); ++x) acc = add(acc, ins[x], tol);
  return acc;
}

namespace {

template <class Op>
Observable measured_observable_impl(const InstrumentOf<Op> &ins,
                                    Tolerance tol) {
  std::vector<Effect> effects;
  effects.reserve(ins.size());
  for (const auto &op : ins.ops()) effects.push_back(measured_effect(op, tol));
  return Observable(ins.outcomes(), std::move(effects), tol);
}

template <class Op>
State updated_state_impl(const InstrumentOf<Op> &ins, const std::string &x,
                         const State &rho, Tolerance tol) {
  const CMatrix out = qcond::apply(ins.op(x), rho);
  const double p = out.trace().real();
  if (!(p > tol.atol)) throw OutcomeNotObserved(x);
  return State(hermitian_part(out) / p, tol);
}

}  // namespace

Observable measured_observable(const Instrument &ins, Tolerance tol) {
  return measured_observable_impl(ins, tol);
}

Observable measured_observable(const MapInstrument &ins, Tolerance tol) {
  return measured_observable_impl(ins, tol);
}

State updated_state(const Instrument &ins, const std::string &x,
                    const State &rho, Tolerance tol) {
  return updated_state_impl(ins, x, rho, tol);
}

State updated_state(const MapInstrument &ins, const std::string &x,
                    const State &rho, Tolerance tol) {
  return updated_state_impl(ins, x, rho, tol);
}

BiObservable given_observable(const Observable &B, const Instrument &ins,
                              Tolerance tol) {
  if (B.dim() != ins.dim_out()) {
    throw DimensionError("given_observable: observable dim " +
                         std::to_string(B.dim()) + " vs instrument output " +
                         std::to_string(ins.dim_out()));
  }
  std::vector<Effect> grid;
  grid.reserve(ins.size() * B.size());
  for (const auto &op : ins.ops()) {
    for (const auto &b : B.effects()) grid.push_back(dual_apply(op, b, tol));
  }
  return BiObservable(ins.outcomes(), B.outcomes(), std::move(grid), tol);
}

double given_distribution(const Observable &B, const Instrument &ins,
                          const State &rho,
                          const std::vector<std::string> &set1,
                          const std::vector<std::string> &set2,
                          Tolerance tol) {
  if (B.dim() != ins.dim_out() || rho.dim() != ins.dim_in()) {
    throw DimensionError("given_distribution: dimensions do not chain");
  }
  const auto xs = ins.outcomes().indices_of(set1);
  const auto ys = B.outcomes().indices_of(set2);
  CMatrix out = zeros(ins.dim_out(), ins.dim_out());
  for (std::size_t x : xs) out += qcond::apply(ins[x], rho);
  const double p = out.trace().real();
  if (p <= tol.atol) return 0.0;
  const State updated(hermitian_part(out) / p, tol);
  std::vector<std::string> labels;
  for (std::size_t y : ys) labels.push_back(B.outcomes().label(y));
  return p * observable_distribution(updated, B, labels, tol);
}

Instrument condition_instrument(const Channel &ch, const Instrument &jns,
                                Tolerance tol) {
  if (ch.dim_out() != jns.dim_in()) {
    throw DimensionError("condition_instrument: channel output " +
                         std::to_string(ch.dim_out()) +
                         " vs instrument input " +
                         std::to_string(jns.dim_in()));
  }
  std::vector<Operation> ops;
  ops.reserve(jns.size());
  for (const auto &j : jns.ops()) {
    ops.push_back(sequential_product(static_cast<const Operation &>(ch), j,
                                     tol));
  }
  return Instrument(jns.outcomes(), std::move(ops), tol);
}

BiInstrument given_instrument(const Instrument &ins, const Instrument &jns,
                              Tolerance tol) {
  if (ins.dim_out() != jns.dim_in()) {
    throw DimensionError("given_instrument: dimensions do not chain");
  }
  std::vector<Operation> grid;
  grid.reserve(ins.size() * jns.size());
  for (const auto &i : ins.ops()) {
    for (const auto &j : jns.ops()) {
      grid.push_back(sequential_product(i, j, tol));
    }
  }
  return BiInstrument(ins.outcomes(), jns.outcomes(), std::move(grid), tol);
}

// Holevo instruments ------------------------------------------------------

HolevoSpec::HolevoSpec(Observable A_, std::vector<State> alphas_)
    : A(std::move(A_)), alphas(std::move(alphas_)) {
  if (alphas.size() != A.size()) {
    throw InvariantError("labels", "Holevo spec needs one state per outcome (" +
                                       std::to_string(A.size()) + " outcomes, " +
                                       std::to_string(alphas.size()) +
                                       " states)");
  }
  for (const auto &s : alphas) {
    if (s.dim() != alphas.front().dim()) {
      throw InvariantError("dimension", "Holevo states differ in dimension");
    }
  }
}

Operation holevo_operation(const Effect &a, const State &alpha,
                           Tolerance tol) {
  const Spectrum sa = spectral_decomposition(a.matrix(), tol);
  const Spectrum sp = spectral_decomposition(alpha.matrix(), tol);
  std::vector<CMatrix> kraus;
  for (std::size_t j = 0; j < sa.values.size(); ++j) {
    if (sa.values[j] <= 0) continue;
    for (std::size_t k = 0; k < sp.values.size(); ++k) {
      if (sp.values[k] <= 0) continue;
      kraus.push_back(std::sqrt(sa.values[j] * sp.values[k]) *
                      (sp.vectors[k] * sa.vectors[j].adjoint()));
    }
  }
  if (kraus.empty()) kraus.push_back(zeros(alpha.dim(), a.dim()));
  return Operation(std::move(kraus), tol);
}

Instrument holevo_instrument(const HolevoSpec &spec, Tolerance tol) {
  std::vector<Operation> ops;
  ops.reserve(spec.A.size());
  for (std::size_t x = 0; x < spec.A.size(); ++x) {
    ops.push_back(holevo_operation(spec.A[x], spec.alphas[x], tol));
  }
  return Instrument(spec.A.outcomes(), std::move(ops), tol);
}

CMatrix holevo_dual(const HolevoSpec &spec, std::size_t x, const CMatrix &b) {
  return trace_product(spec.alphas.at(x).matrix(), b) * spec.A[x].matrix();
}

HolevoSpec holevo_compose_spec(const HolevoSpec &hB, const HolevoSpec &hA,
                               Tolerance tol) {
  if (hA.dim_out() != hB.dim_in()) {
    throw DimensionError("holevo_compose: first maps to dim " +
                         std::to_string(hA.dim_out()) + " but second expects " +
                         std::to_string(hB.dim_in()));
  }
  std::vector<CMatrix> c;
  std::vector<State> delta;
  for (std::size_t x = 0; x < hA.A.size(); ++x) {
    for (std::size_t y = 0; y < hB.A.size(); ++y) {
      const double w =
          trace_product(hA.alphas[x].matrix(), hB.A[y].matrix()).real();
      c.push_back(w * hA.A[x].matrix());
      delta.push_back(hB.alphas[y]);
    }
  }
  return HolevoSpec(
      Observable(OutcomeSpace::product(hA.A.outcomes(), hB.A.outcomes()), c,
                 tol),
      std::move(delta));
}

BiInstrument holevo_compose(const HolevoSpec &hB, const HolevoSpec &hA,
                            Tolerance tol) {
  const Instrument flat = holevo_instrument(holevo_compose_spec(hB, hA, tol),
                                            tol);
  return BiInstrument(hA.A.outcomes(), hB.A.outcomes(), flat.ops(), tol);
}

double max_deviation(const BiObservable &a, const BiObservable &b) {
  if (!(a.first() == b.first()) || !(a.second() == b.second()) ||
      a.dim() != b.dim()) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    dev = std::max(dev, max_abs_diff(a.grid()[i].matrix(),
                                     b.grid()[i].matrix()));
  }
  return dev;
}

}  // namespace qcond
