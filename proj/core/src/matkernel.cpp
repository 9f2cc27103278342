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

#include "qcond/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qcond/errors.hpp"

namespace qcond {

Tolerance Tolerance::from_env() {
  Tolerance tol;
  if (const char *env = std::getenv("QCOND_TOL")) {
    char *end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0) {
      tol.atol = v;
    }
  }
  return tol;
}

CMatrix identity(std::size_t dim) { return CMatrix::Identity(dim, dim); }

CMatrix zeros(std::size_t rows, std::size_t cols) {
  return CMatrix::Zero(rows, cols);
}

CMatrix outer(const CVector &v) { return v * v.adjoint(); }

CMatrix matrix_unit(std::size_t dim, std::size_t i, std::size_t j) {
  CMatrix e = CMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

CMatrix adjoint(const CMatrix &m) { return m.adjoint(); }

CMatrix kron(const CMatrix &a, const CMatrix &b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  CMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix partial_trace_right(const CMatrix &m, std::size_t dimH,
                            std::size_t dimK) {
  const auto n = static_cast<Eigen::Index>(dimH * dimK);
  if (dimH == 0 || dimK == 0 || m.rows() != n || m.cols() != n) {
    throw DimensionError("partial_trace_right: expected a " +
                         std::to_string(n) + "x" + std::to_string(n) +
                         " matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  const auto h = static_cast<Eigen::Index>(dimH);
  const auto k = static_cast<Eigen::Index>(dimK);
  CMatrix out(h, h);
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < h; ++j) {
      out(i, j) = m.block(i * k, j * k, k, k).trace();
    }
  }
  return out;
}

Complex trace(const CMatrix &m) { return m.trace(); }

Complex trace_product(const CMatrix &a, const CMatrix &b) {
  // tr(ab) = sum_ij a_ij b_ji
  return a.cwiseProduct(b.transpose()).sum();
}

CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_square(const CMatrix &m) { return m.rows() == m.cols(); }

bool all_finite(const CMatrix &m) {
  return m.real().allFinite() && m.imag().allFinite();
}

bool is_hermitian(const CMatrix &m, Tolerance tol) {
  return is_square(m) && max_abs_diff(m, m.adjoint()) <= tol.atol;
}

double min_eigenvalue(const CMatrix &m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const CMatrix &m, Tolerance tol) {
  if (!is_square(m) || !all_finite(m)) return false;
  if (!is_hermitian(m, tol)) return false;
  return min_eigenvalue(m) >= -tol.atol;
}

bool is_effect(const CMatrix &m, Tolerance tol) {
  if (!is_square(m)) return false;
  return is_psd(m, tol) && is_psd(identity(m.rows()) - m, tol);
}

Spectrum spectral_decomposition(const CMatrix &m, Tolerance tol) {
  Spectrum s;
  if (m.size() == 0) return s;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  const auto &vals = es.eigenvalues();
  const auto &vecs = es.eigenvectors();
  s.values.reserve(vals.size());
  s.vectors.reserve(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double v = vals(i);
    if (v < 0 && v >= -tol.atol) v = 0.0;
    s.values.push_back(v);
    s.vectors.emplace_back(vecs.col(i));
  }
  return s;
}

CMatrix psd_sqrt(const CMatrix &m, Tolerance tol) {
  const Spectrum s = spectral_decomposition(m, tol);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double v = std::max(s.values[i], 0.0);
    if (v > 0) out += std::sqrt(v) * outer(s.vectors[i]);
  }
  return out;
}

CMatrix psd_inv_sqrt(const CMatrix &m, Tolerance tol) {
  const Spectrum s = spectral_decomposition(m, tol);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.values[i] <= tol.atol) {
      throw InvariantError("singular",
                           "matrix has eigenvalue " +
                               std::to_string(s.values[i]));
    }
    out += (1.0 / std::sqrt(s.values[i])) * outer(s.vectors[i]);
  }
  return out;
}

}  // namespace qcond
