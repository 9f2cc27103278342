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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qcond {

using Complex = std::complex<double>;

/**
 * Dense complex matrix used for every operator in the library.
 *
 * Kronecker products use the row-major block convention: in kron(a, b) the
 * indices of `a` are major, so entry ((i, k), (j, l)) sits at
 * (i * b.rows() + k, j * b.cols() + l). Composite spaces are always laid out
 * as H (left) tensor K (right), and the only partial trace offered is over
 * the right factor.
 */
using CMatrix = Eigen::MatrixXcd;

/// Column vector; kets are stored as n x 1 matrices.
using CVector = Eigen::VectorXcd;

/// Absolute tolerance shared by entrywise and eigenvalue checks.
struct Tolerance {
  double atol = 1e-9;

  /// Default tolerance, overridden by the QCOND_TOL environment variable
  /// when it holds a positive number.
  static Tolerance from_env();
};

CMatrix identity(std::size_t dim);
CMatrix zeros(std::size_t rows, std::size_t cols);

/// |v><v| for a column vector.
CMatrix outer(const CVector &v);

/// Matrix unit E_ij (a single 1 at (i, j)).
CMatrix matrix_unit(std::size_t dim, std::size_t i, std::size_t j);

CMatrix adjoint(const CMatrix &m);
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Traces out the right factor of an operator on H tensor K.
/// Throws DimensionError unless m is (dimH*dimK) x (dimH*dimK).
CMatrix partial_trace_right(const CMatrix &m, std::size_t dimH,
                            std::size_t dimK);

Complex trace(const CMatrix &m);

/// tr(a b) without forming the product.
Complex trace_product(const CMatrix &a, const CMatrix &b);

/// (m + m^dagger) / 2
CMatrix hermitian_part(const CMatrix &m);

/// max |a_ij - b_ij|; +inf when the shapes differ.
double max_abs_diff(const CMatrix &a, const CMatrix &b);

bool is_square(const CMatrix &m);
bool all_finite(const CMatrix &m);
bool is_hermitian(const CMatrix &m, Tolerance tol);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const CMatrix &m);

bool is_psd(const CMatrix &m, Tolerance tol);
bool is_effect(const CMatrix &m, Tolerance tol);

/// Spectral decomposition of the Hermitian part of m. Eigenvalues in
/// [-atol, 0) are clipped to zero; the caller decides what to do with
/// anything more negative.
struct Spectrum {
  std::vector<double> values;
  std::vector<CVector> vectors;
};
Spectrum spectral_decomposition(const CMatrix &m, Tolerance tol);

/// Principal square root of a PSD matrix (negative eigenvalues clipped).
CMatrix psd_sqrt(const CMatrix &m, Tolerance tol);

/// Inverse square root of a positive-definite matrix. Throws
/// InvariantError("singular") when the smallest eigenvalue is <= atol.
CMatrix psd_inv_sqrt(const CMatrix &m, Tolerance tol);

}  // namespace qcond
