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

#include "qcond/measmodel.hpp"

#include <cmath>
#include <string>

#include "qcond/errors.hpp"

namespace qcond {

namespace {

void require_probe_dim(std::size_t dim_k, const Observable &probe) {
  if (probe.dim() != dim_k) {
    throw DimensionError("probe observable has dim " +
                         std::to_string(probe.dim()) + ", expected " +
                         std::to_string(dim_k));
  }
}

// tr_K[X (I_H tensor P)]
CMatrix probe_reduce(const CMatrix &x, const CMatrix &lifted_probe,
                     std::size_t dim_h, std::size_t dim_k) {
  return partial_trace_right(x * lifted_probe, dim_h, dim_k);
}

}  // namespace

MeasurementModel::MeasurementModel(std::size_t dim_h_, std::size_t dim_k_,
                                   Instrument interaction_, Observable probe_)
    : dim_h(dim_h_),
      dim_k(dim_k_),
      interaction(std::move(interaction_)),
      probe(std::move(probe_)) {
  if (interaction.dim_in() != dim_h || interaction.dim_out() != dim_h * dim_k) {
    throw DimensionError("interaction must map dim " + std::to_string(dim_h) +
                         " to dim " + std::to_string(dim_h * dim_k));
  }
  require_probe_dim(dim_k, probe);
}

MapBiInstrument measured_bi_instrument(const MeasurementModel &m,
                                       Tolerance tol) {
  const CMatrix id_h = identity(m.dim_h);
  std::vector<LinearMap> grid;
  grid.reserve(m.interaction.size() * m.probe.size());
  for (const auto &op : m.interaction.ops()) {
    for (const auto &p : m.probe.effects()) {
      const CMatrix lifted = kron(id_h, p.matrix());
      grid.push_back(LinearMap::from_action(
          m.dim_h, m.dim_h, [&](const CMatrix &e) {
            return probe_reduce(qcond::apply(op, e), lifted, m.dim_h, m.dim_k);
          }));
    }
  }
  return MapBiInstrument(m.interaction.outcomes(), m.probe.outcomes(),
                         std::move(grid), tol);
}

MapInstrument measured_instrument(const MeasurementModel &m, Tolerance tol) {
  const Channel total = total_channel(m.interaction, tol);
  const CMatrix id_h = identity(m.dim_h);
  std::vector<LinearMap> ops;
  ops.reserve(m.probe.size());
  for (const auto &p : m.probe.effects()) {
    const CMatrix lifted = kron(id_h, p.matrix());
    ops.push_back(
        LinearMap::from_action(m.dim_h, m.dim_h, [&](const CMatrix &e) {
          return probe_reduce(qcond::apply(total, e), lifted, m.dim_h, m.dim_k);
        }));
  }
  return MapInstrument(m.probe.outcomes(), std::move(ops), tol);
}

MapInstrument reduced_instrument(const MeasurementModel &m, Tolerance tol) {
  std::vector<LinearMap> ops;
  ops.reserve(m.interaction.size());
  for (const auto &op : m.interaction.ops()) {
    ops.push_back(
        LinearMap::from_action(m.dim_h, m.dim_h, [&](const CMatrix &e) {
          return partial_trace_right(qcond::apply(op, e), m.dim_h, m.dim_k);
        }));
  }
  return MapInstrument(m.interaction.outcomes(), std::move(ops), tol);
}

BiObservable measured_bi_observable(const MeasurementModel &m, Tolerance tol) {
  const CMatrix id_h = identity(m.dim_h);
  std::vector<Effect> grid;
  grid.reserve(m.interaction.size() * m.probe.size());
  for (const auto &op : m.interaction.ops()) {
    for (const auto &p : m.probe.effects()) {
      grid.emplace_back(hermitian_part(dual(op, kron(id_h, p.matrix()))), tol);
    }
  }
  return BiObservable(m.interaction.outcomes(), m.probe.outcomes(),
                      std::move(grid), tol);
}

Observable measured_pointer_observable(const MeasurementModel &m,
                                       Tolerance tol) {
  const Channel total = total_channel(m.interaction, tol);
  const CMatrix id_h = identity(m.dim_h);
  std::vector<CMatrix> effects;
  effects.reserve(m.probe.size());
  for (const auto &p : m.probe.effects()) {
    const CMatrix lifted = kron(id_h, p.matrix());
    CMatrix acc = zeros(m.dim_h, m.dim_h);
    for (const auto &k : total.kraus()) acc += k.adjoint() * lifted * k;
    effects.push_back(hermitian_part(acc));
  }
  return Observable(m.probe.outcomes(), effects, tol);
}

// Kraus-separable channels ------------------------------------------------

KrausSeparableChannel::KrausSeparableChannel(std::vector<CMatrix> ks_,
                                             std::vector<State> rhos_,
                                             Tolerance tol)
    : ks(std::move(ks_)), rhos(std::move(rhos_)) {
  if (ks.empty() || ks.size() != rhos.size()) {
    throw InvariantError("labels", "need one probe state per Kraus operator");
  }
  const auto d = ks.front().rows();
  CMatrix sum = zeros(d, d);
  for (const auto &k : ks) {
    if (k.rows() != d || k.cols() != d) {
      throw InvariantError("shape", "Kraus operators must be square on H");
    }
    sum += k.adjoint() * k;
  }
  for (const auto &r : rhos) {
    if (r.dim() != rhos.front().dim()) {
      throw InvariantError("dimension", "probe states differ in dimension");
    }
  }
  const double dev = max_abs_diff(sum, identity(d));
  if (dev > tol.atol) {
    throw InvariantError("normalization", "sum of K^dagger K differs from I by " +
                                              std::to_string(dev));
  }
}

Channel kraus_separable_total(const KrausSeparableChannel &ks, Tolerance tol) {
  std::vector<CMatrix> kraus;
  for (std::size_t i = 0; i < ks.ks.size(); ++i) {
    const Spectrum s = spectral_decomposition(ks.rhos[i].matrix(), tol);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (s.values[k] <= 0) continue;
      kraus.push_back(std::sqrt(s.values[k]) * kron(ks.ks[i], s.vectors[k]));
    }
  }
  return Channel(std::move(kraus), tol);
}

CMatrix kraus_separable_dual(const KrausSeparableChannel &ks, const CMatrix &a,
                             const CMatrix &b) {
  CMatrix out = zeros(ks.dim_h(), ks.dim_h());
  for (std::size_t i = 0; i < ks.ks.size(); ++i) {
    out += trace_product(ks.rhos[i].matrix(), b) *
           (ks.ks[i].adjoint() * a * ks.ks[i]);
  }
  return out;
}

StochasticMatrix kraus_separable_coefficients(const KrausSeparableChannel &ks,
                                              const Observable &probe,
                                              Tolerance tol) {
  require_probe_dim(ks.dim_k(), probe);
  Eigen::MatrixXd c(ks.ks.size(), probe.size());
  for (std::size_t i = 0; i < ks.ks.size(); ++i) {
    for (std::size_t y = 0; y < probe.size(); ++y) {
      c(i, y) = trace_product(ks.rhos[i].matrix(), probe[y].matrix()).real();
    }
  }
  return StochasticMatrix(probe.outcomes(), std::move(c), tol);
}

Instrument kraus_separable_instrument(const KrausSeparableChannel &ks,
                                      const Observable &probe,
                                      Tolerance tol) {
  const StochasticMatrix c = kraus_separable_coefficients(ks, probe, tol);
  std::vector<Operation> ops;
  for (std::size_t y = 0; y < probe.size(); ++y) {
    std::vector<CMatrix> kraus;
    for (std::size_t i = 0; i < ks.ks.size(); ++i) {
      if (c(i, y) > 0) kraus.push_back(std::sqrt(c(i, y)) * ks.ks[i]);
    }
    if (kraus.empty()) kraus.push_back(zeros(ks.dim_h(), ks.dim_h()));
    ops.emplace_back(std::move(kraus), tol);
  }
  return Instrument(probe.outcomes(), std::move(ops), tol);
}

Observable kraus_separable_pointer(const KrausSeparableChannel &ks,
                                   const Observable &probe, Tolerance tol) {
  const StochasticMatrix c = kraus_separable_coefficients(ks, probe, tol);
  std::vector<CMatrix> effects(probe.size(), zeros(ks.dim_h(), ks.dim_h()));
  for (std::size_t i = 0; i < ks.ks.size(); ++i) {
    const CMatrix kk = ks.ks[i].adjoint() * ks.ks[i];
    for (std::size_t y = 0; y < probe.size(); ++y) effects[y] += c(i, y) * kk;
  }
  return Observable(probe.outcomes(), effects, tol);
}

std::vector<CMatrix> lifted_kraus(const std::vector<CMatrix> &as,
                                  const std::vector<CVector> &psis) {
  if (as.size() != psis.size()) {
    throw InvariantError("labels", "need one probe vector per operator");
  }
  std::vector<CMatrix> out;
  out.reserve(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    out.push_back(kron(as[i], psis[i]));
  }
  return out;
}

KrausSeparableChannel simple_kraus_separable(const std::vector<CMatrix> &as,
                                             const std::vector<CVector> &psis,
                                             Tolerance tol) {
  if (as.size() != psis.size()) {
    throw InvariantError("labels", "need one probe vector per operator");
  }
  std::vector<State> rhos;
  rhos.reserve(psis.size());
  for (const auto &psi : psis) {
    if (std::abs(psi.norm() - 1.0) > tol.atol) {
      throw InvariantError("unit-vector", "probe vector is not normalized");
    }
    rhos.emplace_back(outer(psi), tol);
  }
  return KrausSeparableChannel(as, std::move(rhos), tol);
}

// Holevo-separable models -------------------------------------------------

HolevoSeparableSpec::HolevoSeparableSpec(Observable A_, std::vector<State> betas_,
                                         std::vector<State> gammas_)
    : A(std::move(A_)), betas(std::move(betas_)), gammas(std::move(gammas_)) {
  if (betas.size() != A.size() || gammas.size() != A.size()) {
    throw InvariantError("labels",
                         "need one (beta, gamma) pair per outcome of A");
  }
  for (std::size_t x = 0; x < A.size(); ++x) {
    if (betas[x].dim() != A.dim()) {
      throw InvariantError("dimension", "beta states must live on H");
    }
    if (gammas[x].dim() != gammas.front().dim()) {
      throw InvariantError("dimension", "gamma states differ in dimension");
    }
  }
}

HolevoSpec HolevoSeparableSpec::joint() const {
  std::vector<State> alphas;
  alphas.reserve(A.size());
  for (std::size_t x = 0; x < A.size(); ++x) {
    alphas.emplace_back(kron(betas[x].matrix(), gammas[x].matrix()));
  }
  return HolevoSpec(A, std::move(alphas));
}

MeasurementModel holevo_separable_model(const HolevoSeparableSpec &spec,
                                        const Observable &probe,
                                        Tolerance tol) {
  return MeasurementModel(spec.dim_h(), spec.dim_k(),
                          holevo_instrument(spec.joint(), tol), probe);
}

CMatrix HolevoModelQuantities::interaction_dual(std::size_t x,
                                                const CMatrix &a) const {
  return trace_product(alphas.at(x), a) * A[x].matrix();
}

HolevoModelQuantities holevo_model_quantities(const HolevoSeparableSpec &spec,
                                              const Observable &probe,
                                              Tolerance tol) {
  require_probe_dim(spec.dim_k(), probe);
  const std::size_t nx = spec.A.size();
  const std::size_t ny = probe.size();
  const std::size_t dh = spec.dim_h();

  Eigen::MatrixXd c(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      c(x, y) = trace_product(spec.gammas[x].matrix(), probe[y].matrix()).real();
    }
  }

  std::vector<CMatrix> alphas;
  for (std::size_t x = 0; x < nx; ++x) {
    alphas.push_back(kron(spec.betas[x].matrix(), spec.gammas[x].matrix()));
  }

  std::vector<LinearMap> grid;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      grid.push_back(LinearMap::from_action(dh, dh, [&](const CMatrix &e) {
        return CMatrix(trace_product(e, spec.A[x].matrix()) * c(x, y) *
                       spec.betas[x].matrix());
      }));
    }
  }

  std::vector<LinearMap> j2;
  for (std::size_t y = 0; y < ny; ++y) {
    j2.push_back(LinearMap::from_action(dh, dh, [&](const CMatrix &e) {
      CMatrix acc = zeros(dh, dh);
      for (std::size_t x = 0; x < nx; ++x) {
        acc += trace_product(e, spec.A[x].matrix()) * c(x, y) *
               spec.betas[x].matrix();
      }
      return acc;
    }));
  }

  std::vector<Effect> bi;
  std::vector<CMatrix> pointer(ny, zeros(dh, dh));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      bi.emplace_back(c(x, y) * spec.A[x].matrix(), tol);
      pointer[y] += c(x, y) * spec.A[x].matrix();
    }
  }

  return HolevoModelQuantities{
      std::move(alphas),
      spec.A,
      MapBiInstrument(spec.A.outcomes(), probe.outcomes(), std::move(grid), tol),
      MapInstrument(probe.outcomes(), std::move(j2), tol),
      holevo_instrument(HolevoSpec(spec.A, spec.betas), tol),
      BiObservable(spec.A.outcomes(), probe.outcomes(), std::move(bi), tol),
      Observable(probe.outcomes(), pointer, tol),
      StochasticMatrix(probe.outcomes(), std::move(c), tol)};
}

}  // namespace qcond
