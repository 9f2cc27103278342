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

#include "qcond/channels.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qcond/errors.hpp"

namespace qcond {

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_input_dim(std::size_t expected, const CMatrix &m,
                       const char *where) {
  const auto n = static_cast<Eigen::Index>(expected);
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(where) + ": expected " +
                         shape(expected, expected) + " input, got " +
                         shape(m.rows(), m.cols()));
  }
}

}  // namespace

// Operation / Channel -----------------------------------------------------

Operation::Operation(std::vector<CMatrix> kraus, Tolerance tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) {
    throw InvariantError("nonempty", "operation needs at least one Kraus "
                                     "operator");
  }
  dim_out_ = static_cast<std::size_t>(kraus_.front().rows());
  dim_in_ = static_cast<std::size_t>(kraus_.front().cols());
  if (dim_in_ == 0 || dim_out_ == 0) {
    throw InvariantError("shape", "empty Kraus operator");
  }
  for (const auto &k : kraus_) {
    if (static_cast<std::size_t>(k.rows()) != dim_out_ ||
        static_cast<std::size_t>(k.cols()) != dim_in_) {
      throw InvariantError("shape", "Kraus operators disagree in shape: " +
                                        shape(dim_out_, dim_in_) + " vs " +
                                        shape(k.rows(), k.cols()));
    }
    if (!all_finite(k)) {
      throw InvariantError("finite", "Kraus operator has NaN/Inf entries");
    }
  }
  if (!is_psd(qcond::identity(dim_in_) - kraus_sum(), tol)) {
    throw InvariantError("trace-nonincreasing",
                         "sum of K^dagger K exceeds the identity");
  }
}

Operation Operation::identity(std::size_t dim) {
  return Operation({qcond::identity(dim)});
}

CMatrix Operation::kraus_sum() const {
  CMatrix s = zeros(dim_in_, dim_in_);
  for (const auto &k : kraus_) s += k.adjoint() * k;
  return s;
}

bool is_trace_preserving(const Operation &op, Tolerance tol) {
  return max_abs_diff(op.kraus_sum(), identity(op.dim_in())) <= tol.atol;
}

Channel::Channel(Operation op, Tolerance tol) : Operation(std::move(op)) {
  const double dev = max_abs_diff(kraus_sum(), qcond::identity(dim_in()));
  if (dev > tol.atol) {
    throw InvariantError("trace-preserving",
                         "sum of K^dagger K differs from I by " +
                             std::to_string(dev));
  }
}

Channel::Channel(std::vector<CMatrix> kraus, Tolerance tol)
    : Channel(Operation(std::move(kraus), tol), tol) {}

Channel Channel::identity(std::size_t dim) {
  return Channel(Operation::identity(dim));
}

Channel Channel::unitary(const CMatrix &u, Tolerance tol) {
  return Channel(std::vector<CMatrix>{u}, tol);
}

CMatrix apply(const Operation &op, const CMatrix &rho) {
  require_input_dim(op.dim_in(), rho, "apply");
  CMatrix out = zeros(op.dim_out(), op.dim_out());
  for (const auto &k : op.kraus()) out += k * rho * k.adjoint();
  return out;
}

CMatrix apply(const Operation &op, const State &rho) {
  return qcond::apply(op, rho.matrix());
}

CMatrix dual(const Operation &op, const CMatrix &a) {
  require_input_dim(op.dim_out(), a, "dual");
  CMatrix out = zeros(op.dim_in(), op.dim_in());
  for (const auto &k : op.kraus()) out += k.adjoint() * a * k;
  return out;
}

Effect dual_apply(const Operation &op, const Effect &a, Tolerance tol) {
  return Effect(hermitian_part(dual(op, a.matrix())), tol);
}

Effect measured_effect(const Operation &op, Tolerance tol) {
  return Effect(hermitian_part(op.kraus_sum()), tol);
}

Operation sequential_product(const Operation &first, const Operation &second,
                             Tolerance tol) {
  if (first.dim_out() != second.dim_in()) {
    throw DimensionError("sequential_product: first maps to dim " +
                         std::to_string(first.dim_out()) +
                         " but second expects " +
                         std::to_string(second.dim_in()));
  }
  std::vector<CMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto &k : first.kraus()) {
    for (const auto &l : second.kraus()) kraus.push_back(l * k);
  }
  return Operation(std::move(kraus), tol);
}

Channel sequential_product(const Channel &first, const Channel &second,
                           Tolerance tol) {
  return Channel(
      sequential_product(static_cast<const Operation &>(first),
                         static_cast<const Operation &>(second), tol),
      tol);
}

Operation add(const Operation &a, const Operation &b, Tolerance tol) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("add: operations have different shapes");
  }
  std::vector<CMatrix> kraus = a.kraus();
  kraus.insert(kraus.end(), b.kraus().begin(), b.kraus().end());
  return Operation(std::move(kraus), tol);
}

Effect condition_effect(const Channel &ch, const Effect &b, Tolerance tol) {
  return dual_apply(ch, b, tol);
}

Observable condition_observable(const Channel &ch, const Observable &B,
                                Tolerance tol) {
  std::vector<Effect> out;
  out.reserve(B.size());
  for (const auto &e : B.effects()) out.push_back(dual_apply(ch, e, tol));
  return Observable(B.outcomes(), std::move(out), tol);
}

Observable complete_subnormalized(const Channel &ch,
                                  const std::vector<Effect> &bs,
                                  Tolerance tol) {
  return complete_subnormalized(ch, bs, OutcomeSpace::range(bs.size()), tol);
}

Observable complete_subnormalized(const Channel &ch,
                                  const std::vector<Effect> &bs,
                                  const OutcomeSpace &labels, Tolerance tol) {
  if (bs.empty()) {
    throw InvariantError("nonempty", "completion needs at least one effect");
  }
  const std::size_t d = ch.dim_out();
  CMatrix residual = identity(d);
  for (const auto &b : bs) {
    if (b.dim() != d) {
      throw DimensionError("complete_subnormalized: effect dim " +
                           std::to_string(b.dim()) + " vs channel output " +
                           std::to_string(d));
    }
    residual -= b.matrix();
  }
  if (!is_psd(residual, tol)) {
    throw InvariantError("subnormalized", "sum of effects exceeds I");
  }
  const double n = static_cast<double>(bs.size());
  std::vector<CMatrix> out;
  out.reserve(bs.size());
  for (const auto &b : bs) out.push_back(b.matrix() + residual / n);
  return Observable(labels, out, tol);
}

// LinearMap ---------------------------------------------------------------

LinearMap::LinearMap(std::size_t dim_in, std::size_t dim_out,
                     std::vector<CMatrix> images)
    : dim_in_(dim_in), dim_out_(dim_out), images_(std::move(images)) {
  if (dim_in_ == 0 || dim_out_ == 0 || images_.size() != dim_in_ * dim_in_) {
    throw InvariantError("shape", "linear map needs dimIn^2 images");
  }
  const auto n = static_cast<Eigen::Index>(dim_out_);
  for (const auto &m : images_) {
    if (m.rows() != n || m.cols() != n) {
      throw InvariantError("shape", "linear map image has wrong shape");
    }
  }
}

LinearMap LinearMap::from_operation(const Operation &op) {
  return from_action(op.dim_in(), op.dim_out(),
                     [&](const CMatrix &e) { return qcond::apply(op, e); });
}

CMatrix apply(const LinearMap &map, const CMatrix &rho) {
  require_input_dim(map.dim_in(), rho, "apply");
  CMatrix out = zeros(map.dim_out(), map.dim_out());
  for (std::size_t i = 0; i < map.dim_in(); ++i) {
    for (std::size_t j = 0; j < map.dim_in(); ++j) {
      const Complex c = rho(i, j);
      if (c != Complex(0.0)) out += c * map.image(i, j);
    }
  }
  return out;
}

CMatrix apply(const LinearMap &map, const State &rho) {
  return qcond::apply(map, rho.matrix());
}

CMatrix dual(const LinearMap &map, const CMatrix &a) {
  require_input_dim(map.dim_out(), a, "dual");
  // tr[rho X] = sum_ij rho_ij X_ji must equal sum_ij rho_ij tr[map(E_ij) a].
  CMatrix out(map.dim_in(), map.dim_in());
  for (std::size_t i = 0; i < map.dim_in(); ++i) {
    for (std::size_t j = 0; j < map.dim_in(); ++j) {
      out(j, i) = trace_product(map.image(i, j), a);
    }
  }
  return out;
}

Effect dual_apply(const LinearMap &map, const Effect &a, Tolerance tol) {
  return Effect(hermitian_part(dual(map, a.matrix())), tol);
}

Effect measured_effect(const LinearMap &map, Tolerance tol) {
  return Effect(hermitian_part(dual(map, identity(map.dim_out()))), tol);
}

LinearMap sequential_product(const LinearMap &first, const LinearMap &second) {
  if (first.dim_out() != second.dim_in()) {
    throw DimensionError("sequential_product: dimensions do not chain");
  }
  return LinearMap::from_action(
      first.dim_in(), second.dim_out(),
      [&](const CMatrix &e) { return qcond::apply(second, qcond::apply(first, e)); });
}

LinearMap add(const LinearMap &a, const LinearMap &b, Tolerance) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("add: maps have different shapes");
  }
  return LinearMap::from_action(a.dim_in(), a.dim_out(), [&](const CMatrix &e) {
    return CMatrix(qcond::apply(a, e) + qcond::apply(b, e));
  });
}

bool is_trace_preserving(const LinearMap &map, Tolerance tol) {
  return max_abs_diff(dual(map, identity(map.dim_out())),
                      identity(map.dim_in())) <= tol.atol;
}

std::vector<CMatrix> hermitian_basis(std::size_t dim) {
  std::vector<CMatrix> basis;
  basis.reserve(dim * dim);
  const Complex i_unit(0.0, 1.0);
  for (std::size_t i = 0; i < dim; ++i) {
    basis.push_back(matrix_unit(dim, i, i));
    for (std::size_t j = i + 1; j < dim; ++j) {
      basis.push_back(matrix_unit(dim, i, j) + matrix_unit(dim, j, i));
      basis.push_back(i_unit * (matrix_unit(dim, i, j) - matrix_unit(dim, j, i)));
    }
  }
  return basis;
}

namespace {

template <class A, class B>
double deviation_impl(const A &a, const B &b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  for (const auto &x : hermitian_basis(a.dim_in())) {
    dev = std::max(dev, max_abs_diff(qcond::apply(a, x), qcond::apply(b, x)));
  }
  return dev;
}

}  // namespace

double map_deviation(const LinearMap &a, const LinearMap &b) {
  return deviation_impl(a, b);
}
double map_deviation(const Operation &a, const Operation &b) {
  return deviation_impl(a, b);
}
double map_deviation(const Operation &a, const LinearMap &b) {
  return deviation_impl(a, b);
}
double map_deviation(const LinearMap &a, const Operation &b) {
  return deviation_impl(a, b);
}

}  // namespace qcond
