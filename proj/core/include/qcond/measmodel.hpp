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
#include <vector>

#include "qcond/channels.hpp"
#include "qcond/effects.hpp"
#include "qcond/instruments.hpp"

namespace qcond {

/**
 * Measurement model (H, K, interaction, probe): the system H is coupled to
 * a probe space K by an instrument into H tensor K, after which the probe
 * observable is measured on K. Tensor order is always H (left), K (right).
 */
struct MeasurementModel {
  MeasurementModel(std::size_t dim_h, std::size_t dim_k, Instrument interaction,
                   Observable probe);

  std::size_t dim_h;
  std::size_t dim_k;
  Instrument interaction;
  Observable probe;
};

/// J_xy(rho) = tr_K[I_x(rho) (I_H tensor P_y)], as evaluated maps on H.
MapBiInstrument measured_bi_instrument(const MeasurementModel &m,
                                       Tolerance tol = {});

/// J2_y(rho) = tr_K[Ibar(rho) (I_H tensor P_y)], labelled by the probe.
MapInstrument measured_instrument(const MeasurementModel &m,
                                  Tolerance tol = {});

/// Instrument reduced to H: x -> tr_K[I_x(rho)]. Independent of the probe.
MapInstrument reduced_instrument(const MeasurementModel &m, Tolerance tol = {});

/// Jhat_xy = I_x^*(I_H tensor P_y).
BiObservable measured_bi_observable(const MeasurementModel &m,
                                    Tolerance tol = {});

/// Jhat2_y = sum_i K_i^dagger (I_H tensor P_y) K_i over the Kraus operators
/// of the total interaction channel.
Observable measured_pointer_observable(const MeasurementModel &m,
                                       Tolerance tol = {});

/// Channel rho -> sum_i K_i rho K_i^dagger tensor rho_i with K_i on H and
/// probe states rho_i on K.
struct KrausSeparableChannel {
  KrausSeparableChannel(std::vector<CMatrix> ks, std::vector<State> rhos,
                        Tolerance tol = {});

  std::vector<CMatrix> ks;
  std::vector<State> rhos;

  std::size_t dim_h() const { return static_cast<std::size_t>(ks.front().rows()); }
  std::size_t dim_k() const { return rhos.front().dim(); }
};

/// Kraus form on H -> H tensor K: sqrt(p_k) (K_i tensor |v_k>) for the
/// spectral decomposition rho_i = sum_k p_k |v_k><v_k|.
Channel kraus_separable_total(const KrausSeparableChannel &ks,
                              Tolerance tol = {});

/// Closed-form dual on product effects:
/// (a tensor b) -> sum_i tr(rho_i b) K_i^dagger a K_i.
CMatrix kraus_separable_dual(const KrausSeparableChannel &ks, const CMatrix &a,
                             const CMatrix &b);

/// Row-stochastic coefficients tr(rho_i P_y), rows i, columns by the probe.
StochasticMatrix kraus_separable_coefficients(const KrausSeparableChannel &ks,
                                              const Observable &probe,
                                              Tolerance tol = {});

/// Closed form of the measured instrument,
/// J2_y(rho) = sum_i tr(rho_i P_y) K_i rho K_i^dagger, in Kraus form.
Instrument kraus_separable_instrument(const KrausSeparableChannel &ks,
                                      const Observable &probe,
                                      Tolerance tol = {});

/// Closed form of the pointer observable, sum_i tr(rho_i P_y) K_i^dagger K_i.
Observable kraus_separable_pointer(const KrausSeparableChannel &ks,
                                   const Observable &probe, Tolerance tol = {});

/// Lifted Kraus operators K_i phi = A_i phi tensor psi_i, i.e.
/// K_i = A_i tensor |psi_i> (a (dimH*dimK) x dimH matrix).
std::vector<CMatrix> lifted_kraus(const std::vector<CMatrix> &as,
                                  const std::vector<CVector> &psis);

/// Kraus-separable channel with pure probe states |psi_i><psi_i|.
KrausSeparableChannel simple_kraus_separable(const std::vector<CMatrix> &as,
                                             const std::vector<CVector> &psis,
                                             Tolerance tol = {});

/// Holevo instrument into H tensor K whose prepared states factor as
/// beta_x tensor gamma_x.
struct HolevoSeparableSpec {
  HolevoSeparableSpec(Observable A, std::vector<State> betas,
                      std::vector<State> gammas);

  Observable A;
  std::vector<State> betas;
  std::vector<State> gammas;

  std::size_t dim_h() const { return A.dim(); }
  std::size_t dim_k() const { return gammas.front().dim(); }

  /// The unfactored Holevo data with alpha_x = beta_x tensor gamma_x.
  HolevoSpec joint() const;
};

/// Measurement model built from the unfactored Holevo instrument; the
/// generic pipeline that the closed forms below are checked against.
MeasurementModel holevo_separable_model(const HolevoSeparableSpec &spec,
                                        const Observable &probe,
                                        Tolerance tol = {});

/// Every closed-form quantity of a Holevo-separable measurement model.
struct HolevoModelQuantities {
  /// I_x^*(a) = tr((beta_x tensor gamma_x) a) A_x
  CMatrix interaction_dual(std::size_t x, const CMatrix &a) const;

  std::vector<CMatrix> alphas;  // beta_x tensor gamma_x
  Observable A;
  /// J_xy(rho) = tr(rho A_x) tr(gamma_x P_y) beta_x
  MapBiInstrument bi_instrument;
  /// J2_y(rho) = sum_x tr(rho A_x) tr(gamma_x P_y) beta_x
  MapInstrument instrument;
  /// J1 = Holevo instrument of (A, beta)
  Instrument reduced;
  /// Jhat_xy = tr(gamma_x P_y) A_x
  BiObservable bi_observable;
  /// Jhat2_y = sum_x tr(gamma_x P_y) A_x
  Observable pointer;
  /// tr(gamma_x P_y); Jhat2 is the post-processing of A by this kernel.
  StochasticMatrix pointer_kernel;
};

HolevoModelQuantities holevo_model_quantities(const HolevoSeparableSpec &spec,
                                              const Observable &probe,
                                              Tolerance tol = {});

}  // namespace qcond
