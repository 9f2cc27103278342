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

#include "qcond/effects.hpp"
#include "qcond/matkernel.hpp"

namespace qcond {

/**
 * Trace non-increasing completely positive map in Kraus form,
 * rho -> sum_i K_i rho K_i^dagger, with every K_i of shape dimOut x dimIn
 * and sum_i K_i^dagger K_i <= I.
 *
 * Kraus lists are never canonicalized. Two operations are compared by their
 * action on a spanning set of matrices (see map_deviation), not by their
 * Kraus lists.
 */
class Operation {
 public:
  explicit Operation(std::vector<CMatrix> kraus, Tolerance tol = {});

  static Operation identity(std::size_t dim);

  const std::vector<CMatrix> &kraus() const { return kraus_; }
  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }

  /// sum_i K_i^dagger K_i
  CMatrix kraus_sum() const;

 private:
  std::vector<CMatrix> kraus_;
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
};

/// Trace-preserving operation: sum_i K_i^dagger K_i == I.
class Channel : public Operation {
 public:
  explicit Channel(Operation op, Tolerance tol = {});
  explicit Channel(std::vector<CMatrix> kraus, Tolerance tol = {});

  static Channel identity(std::size_t dim);
  /// rho -> U rho U^dagger; U must be unitary within tol.
  static Channel unitary(const CMatrix &u, Tolerance tol = {});
};

bool is_trace_preserving(const Operation &op, Tolerance tol = {});

CMatrix apply(const Operation &op, const CMatrix &rho);
CMatrix apply(const Operation &op, const State &rho);

/// Heisenberg-picture map a -> sum_i K_i^dagger a K_i on arbitrary
/// operators (no validation).
CMatrix dual(const Operation &op, const CMatrix &a);

/// Dual map on effects. The output is symmetrized before validation.
Effect dual_apply(const Operation &op, const Effect &a, Tolerance tol = {});

/// The effect a with tr[op(rho)] = tr(rho a), i.e. the dual of I.
Effect measured_effect(const Operation &op, Tolerance tol = {});

/// "first, then second": rho -> second(first(rho)), Kraus {L_b K_a}.
Operation sequential_product(const Operation &first, const Operation &second,
                             Tolerance tol = {});
Channel sequential_product(const Channel &first, const Channel &second,
                           Tolerance tol = {});

/// Sum of two operations as maps (concatenated Kraus lists).
Operation add(const Operation &a, const Operation &b, Tolerance tol = {});

/// (b|ch) = ch^*(b)
Effect condition_effect(const Channel &ch, const Effect &b, Tolerance tol = {});

/// (B|ch)_x = ch^*(B_x), keeping B's outcome labels.
Observable condition_observable(const Channel &ch, const Observable &B,
                                Tolerance tol = {});

/**
 * Completes a sub-normalized family {b_x} (sum b_x <= I) to an observable by
 * spreading the residual C = I - sum b_x evenly: B_x = b_x + C / n with n the
 * number of effects. Whenever ch^*(C) vanishes, (B|ch)_x == (b_x|ch).
 * Labels default to "0".."n-1".
 */
Observable complete_subnormalized(const Channel &ch,
                                  const std::vector<Effect> &bs,
                                  Tolerance tol = {});
Observable complete_subnormalized(const Channel &ch,
                                  const std::vector<Effect> &bs,
                                  const OutcomeSpace &labels,
                                  Tolerance tol = {});

/**
 * A linear map L(C^dimIn) -> L(C^dimOut) stored by its images of the matrix
 * units: image(i, j) = map(E_ij). Used where an operation is only ever
 * evaluated and never needed in Kraus form.
 */
class LinearMap {
 public:
  LinearMap(std::size_t dim_in, std::size_t dim_out,
            std::vector<CMatrix> images);

  /// Evaluates `action` on each matrix unit.
  template <class F>
  static LinearMap from_action(std::size_t dim_in, std::size_t dim_out,
                               F &&action) {
    std::vector<CMatrix> images;
    images.reserve(dim_in * dim_in);
    for (std::size_t i = 0; i < dim_in; ++i) {
      for (std::size_t j = 0; j < dim_in; ++j) {
        images.push_back(action(matrix_unit(dim_in, i, j)));
      }
    }
    return LinearMap(dim_in, dim_out, std::move(images));
  }

  static LinearMap from_operation(const Operation &op);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const CMatrix &image(std::size_t i, std::size_t j) const {
    return images_[i * dim_in_ + j];
  }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<CMatrix> images_;
};

CMatrix apply(const LinearMap &map, const CMatrix &rho);
CMatrix apply(const LinearMap &map, const State &rho);
/// The unique map with tr[rho dual(a)] = tr[map(rho) a].
CMatrix dual(const LinearMap &map, const CMatrix &a);
Effect dual_apply(const LinearMap &map, const Effect &a, Tolerance tol = {});
Effect measured_effect(const LinearMap &map, Tolerance tol = {});
LinearMap sequential_product(const LinearMap &first, const LinearMap &second);
LinearMap add(const LinearMap &a, const LinearMap &b, Tolerance tol = {});
bool is_trace_preserving(const LinearMap &map, Tolerance tol = {});

/// Hermitian basis of L(C^d): E_ii, E_ij + E_ji and i(E_ij - E_ji), i < j.
std::vector<CMatrix> hermitian_basis(std::size_t dim);

/// Largest entrywise gap between two maps over the Hermitian basis; +inf
/// when the dimensions differ.
double map_deviation(const LinearMap &a, const LinearMap &b);
double map_deviation(const Operation &a, const Operation &b);
double map_deviation(const Operation &a, const LinearMap &b);
double map_deviation(const LinearMap &a, const Operation &b);

}  // namespace qcond
