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

#include "qcond/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcond/errors.hpp"

namespace qcond {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr int kMaxRetries = 3;

}  // namespace

SplitMix64::result_type SplitMix64::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

SplitMix64 SplitMix64::split(std::uint64_t stream) const {
  return SplitMix64(mix64(state_ ^ mix64(stream + kGolden)));
}

double SplitMix64::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::size_t SplitMix64::below(std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double SplitMix64::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  return r * std::cos(t);
}

Complex SplitMix64::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::uint64_t stream_id(const char *name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char *p = name; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  return h;
}

CMatrix ginibre(std::size_t rows, std::size_t cols, SplitMix64 &rng) {
  CMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

CVector random_unit_vector(std::size_t dim, SplitMix64 &rng) {
  CVector v = ginibre(dim, 1, rng);
  return v / v.norm();
}

CMatrix random_unitary(std::size_t dim, SplitMix64 &rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Column phase fix: Haar distributed.
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

State random_state(std::size_t dim, SplitMix64 &rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return State(hermitian_part(rho));
}

State random_state(std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_state(dim, rng);
}

Observable random_observable(std::size_t dim, std::size_t n_outcomes,
                             SplitMix64 &rng) {
  if (n_outcomes == 0) {
    throw InvariantError("nonempty", "observable needs at least one outcome");
  }
  const Tolerance tol;
  for (int attempt = 0;; ++attempt) {
    SplitMix64 local = attempt == 0 ? rng : rng.split(attempt);
    std::vector<CMatrix> gs;
    CMatrix s = zeros(dim, dim);
    for (std::size_t x = 0; x < n_outcomes; ++x) {
      const CMatrix g = ginibre(dim, dim, local);
      gs.push_back(g * g.adjoint());
      s += gs.back();
    }
    try {
      const CMatrix w = psd_inv_sqrt(s, tol);
      std::vector<CMatrix> effects;
      for (const auto &g : gs) effects.push_back(hermitian_part(w * g * w));
      if (attempt == 0) rng = local;
      return Observable(OutcomeSpace::range(n_outcomes), effects);
    } catch (const InvariantError &) {
      if (attempt >= kMaxRetries) throw;
    }
  }
}

Observable random_observable(std::size_t dim, std::size_t n_outcomes,
                             std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_observable(dim, n_outcomes, rng);
}

Effect random_effect(std::size_t dim, SplitMix64 &rng) {
  return random_observable(dim, 2, rng)[0];
}

Channel random_channel(std::size_t dim_in, std::size_t dim_out,
                       std::size_t n_kraus, SplitMix64 &rng) {
  if (dim_in == 0 || dim_out == 0 || n_kraus == 0 ||
      n_kraus * dim_out < dim_in) {
    throw DimensionError("random_channel: need n_kraus * dimOut >= dimIn");
  }
  const auto rows = static_cast<Eigen::Index>(n_kraus * dim_out);
  const auto cols = static_cast<Eigen::Index>(dim_in);
  for (int attempt = 0;; ++attempt) {
    SplitMix64 local = attempt == 0 ? rng : rng.split(attempt);
    const CMatrix g = ginibre(rows, cols, local);
    Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    bool full_rank = true;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (std::abs(r(j, j)) < 1e-8) full_rank = false;
    }
    if (!full_rank) {
      if (attempt >= kMaxRetries) {
        throw InvariantError("rank", "random_channel: rank-deficient draw");
      }
      continue;
    }
    const CMatrix v = qr.householderQ() * CMatrix::Identity(rows, cols);
    std::vector<CMatrix> kraus;
    const auto dout = static_cast<Eigen::Index>(dim_out);
    for (std::size_t a = 0; a < n_kraus; ++a) {
      kraus.push_back(v.block(static_cast<Eigen::Index>(a) * dout, 0, dout, cols));
    }
    if (attempt == 0) rng = local;
    return Channel(std::move(kraus));
  }
}

Channel random_channel(std::size_t dim_in, std::size_t dim_out,
                       std::size_t n_kraus, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_channel(dim_in, dim_out, n_kraus, rng);
}

Instrument random_instrument(std::size_t dim_in, std::size_t dim_out,
                             std::size_t n_outcomes, SplitMix64 &rng,
                             std::size_t kraus_per_outcome) {
  if (n_outcomes == 0 || kraus_per_outcome == 0) {
    throw InvariantError("nonempty", "instrument needs outcomes and Kraus "
                                     "operators");
  }
  const Channel ch =
      random_channel(dim_in, dim_out, n_outcomes * kraus_per_outcome, rng);
  std::vector<Operation> ops;
  for (std::size_t x = 0; x < n_outcomes; ++x) {
    auto first = ch.kraus().begin() +
                 static_cast<std::ptrdiff_t>(x * kraus_per_outcome);
    ops.emplace_back(std::vector<CMatrix>(
        first, first + static_cast<std::ptrdiff_t>(kraus_per_outcome)));
  }
  return Instrument(OutcomeSpace::range(n_outcomes), std::move(ops));
}

Instrument random_instrument(std::size_t dim_in, std::size_t dim_out,
                             std::size_t n_outcomes, std::uint64_t seed,
                             std::size_t kraus_per_outcome) {
  SplitMix64 rng(seed);
  return random_instrument(dim_in, dim_out, n_outcomes, rng, kraus_per_outcome);
}

StochasticMatrix random_stochastic(std::size_t rows, std::size_t cols,
                                   SplitMix64 &rng) {
  Eigen::MatrixXd w(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      w(i, j) = rng.uniform() + 1e-3;
      s += w(i, j);
    }
    w.row(i) /= s;
  }
  return StochasticMatrix(OutcomeSpace::range(cols), std::move(w));
}

std::vector<double> random_weights(std::size_t n, SplitMix64 &rng) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto &v : w) {
    v = rng.uniform() + 1e-3;
    s += v;
  }
  for (auto &v : w) v /= s;
  return w;
}

OutcomeMap random_surjection(const OutcomeSpace &sources,
                             std::size_t n_targets, SplitMix64 &rng) {
  if (n_targets == 0 || n_targets > sources.size()) {
    throw DimensionError("random_surjection: need 1 <= targets <= sources");
  }
  std::vector<std::size_t> image(sources.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    image[i] = i < n_targets ? i : rng.below(n_targets);
  }
  // Fisher-Yates: guaranteed hits land on random sources.
  for (std::size_t i = image.size(); i > 1; --i) {
    std::swap(image[i - 1], image[rng.below(i)]);
  }
  std::vector<std::pair<std::string, std::string>> mapping;
  for (std::size_t i = 0; i < image.size(); ++i) {
    mapping.emplace_back(sources.label(i), std::to_string(image[i]));
  }
  return OutcomeMap(mapping, OutcomeSpace::range(n_targets));
}

}  // namespace qcond
