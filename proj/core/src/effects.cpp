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

#include "qcond/effects.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "qcond/errors.hpp"

namespace qcond {

namespace {

void require_square_finite(const CMatrix &m, const char *what) {
  if (m.rows() == 0 || !is_square(m)) {
    throw InvariantError("square", std::string(what) + " must be a nonempty "
                                                       "square matrix");
  }
  if (!all_finite(m)) {
    throw InvariantError("finite", std::string(what) + " has NaN/Inf entries");
  }
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

// OutcomeSpace ------------------------------------------------------------

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  std::unordered_set<std::string> seen;
  for (const auto &l : labels_) {
    if (!seen.insert(l).second) {
      throw InvariantError("distinct-labels", "duplicate label '" + l + "'");
    }
  }
}

OutcomeSpace OutcomeSpace::range(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return OutcomeSpace(std::move(labels));
}

OutcomeSpace OutcomeSpace::product(const OutcomeSpace &first,
                                   const OutcomeSpace &second) {
  std::vector<std::string> labels;
  labels.reserve(first.size() * second.size());
  for (const auto &x : first.labels()) {
    for (const auto &y : second.labels()) labels.push_back(x + "⊗" + y);
  }
  return OutcomeSpace(std::move(labels));
}

bool OutcomeSpace::contains(const std::string &label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t OutcomeSpace::index_of(const std::string &label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw UnknownLabel(label);
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> OutcomeSpace::indices_of(
    const std::vector<std::string> &subset) const {
  std::vector<std::size_t> out;
  out.reserve(subset.size());
  for (const auto &l : subset) out.push_back(index_of(l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// State / Effect ----------------------------------------------------------

State::State(CMatrix m, Tolerance tol) : m_(std::move(m)) {
  require_square_finite(m_, "state");
  if (!is_psd(m_, tol)) {
    throw InvariantError("psd", "state is not positive semidefinite");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0)) > tol.atol) {
    throw InvariantError("trace", "state trace is " + fmt_double(tr.real()) +
                                      ", expected 1");
  }
}

State State::maximally_mixed(std::size_t dim) {
  return State(identity(dim) / static_cast<double>(dim));
}

State State::pure(const CVector &v, Tolerance tol) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0)) throw InvariantError("nonzero", "pure state of zero vector");
  return State(outer(v) / n2, tol);
}

Effect::Effect(CMatrix m, Tolerance tol) : m_(std::move(m)) {
  require_square_finite(m_, "effect");
  if (!is_psd(m_, tol)) {
    throw InvariantError("psd", "effect is not positive semidefinite");
  }
  if (!is_psd(qcond::identity(m_.rows()) - m_, tol)) {
    throw InvariantError("effect", "effect exceeds the identity");
  }
}

Effect Effect::identity(std::size_t dim) { return Effect(qcond::identity(dim)); }

Effect Effect::zero(std::size_t dim) { return Effect(zeros(dim, dim)); }

Effect Effect::complement(Tolerance tol) const {
  return Effect(qcond::identity(m_.rows()) - m_, tol);
}

// Observable --------------------------------------------------------------

namespace {

std::size_t check_normalized(const std::vector<Effect> &effects,
                             Tolerance tol, const char *what) {
  if (effects.empty()) {
    throw InvariantError("nonempty", std::string(what) + " has no outcomes");
  }
  const std::size_t dim = effects.front().dim();
  CMatrix sum = zeros(dim, dim);
  for (const auto &e : effects) {
    if (e.dim() != dim) {
      throw InvariantError("dimension",
                           std::string(what) + " mixes effect dimensions");
    }
    sum += e.matrix();
  }
  const double dev = max_abs_diff(sum, identity(dim));
  if (dev > tol.atol) {
    throw InvariantError("normalization", std::string(what) +
                                              " effects sum to I only within " +
                                              fmt_double(dev));
  }
  return dim;
}

std::vector<Effect> to_effects(const std::vector<CMatrix> &ms, Tolerance tol) {
  std::vector<Effect> out;
  out.reserve(ms.size());
  for (const auto &m : ms) out.emplace_back(m, tol);
  return out;
}

}  // namespace

Observable::Observable(OutcomeSpace outcomes, std::vector<Effect> effects,
                       Tolerance tol)
    : outcomes_(std::move(outcomes)), effects_(std::move(effects)) {
  if (outcomes_.size() != effects_.size()) {
    throw InvariantError("labels", "observable has " +
                                       std::to_string(outcomes_.size()) +
                                       " labels but " +
                                       std::to_string(effects_.size()) +
                                       " effects");
  }
  dim_ = check_normalized(effects_, tol, "observable");
}

Observable::Observable(OutcomeSpace outcomes,
                       const std::vector<CMatrix> &effects, Tolerance tol)
    : Observable(std::move(outcomes), to_effects(effects, tol), tol) {}

Observable Observable::trivial(std::size_t dim) {
  return Observable(OutcomeSpace({"1"}), {Effect::identity(dim)});
}

const Effect &Observable::effect(const std::string &label) const {
  return effects_[outcomes_.index_of(label)];
}

BiObservable::BiObservable(OutcomeSpace first, OutcomeSpace second,
                           std::vector<Effect> grid, Tolerance tol)
    : first_(std::move(first)),
      second_(std::move(second)),
      grid_(std::move(grid)) {
  if (grid_.size() != first_.size() * second_.size()) {
    throw InvariantError("labels", "bi-observable grid size does not match "
                                   "its outcome spaces");
  }
  dim_ = check_normalized(grid_, tol, "bi-observable");
}

Observable BiObservable::flatten(Tolerance tol) const {
  return Observable(OutcomeSpace::product(first_, second_), grid_, tol);
}

// StochasticMatrix --------------------------------------------------------

StochasticMatrix::StochasticMatrix(OutcomeSpace targets,
                                   Eigen::MatrixXd weights, Tolerance tol)
    : targets_(std::move(targets)), w_(std::move(weights)) {
  if (static_cast<std::size_t>(w_.cols()) != targets_.size()) {
    throw InvariantError("labels", "stochastic matrix column count does not "
                                   "match its target labels");
  }
  if (w_.rows() == 0 || w_.cols() == 0) {
    throw InvariantError("nonempty", "stochastic matrix is empty");
  }
  if (!w_.allFinite()) {
    throw InvariantError("finite", "stochastic matrix has NaN/Inf entries");
  }
  if (w_.minCoeff() < -tol.atol || w_.maxCoeff() > 1.0 + tol.atol) {
    throw InvariantError("range", "stochastic matrix entry outside [0, 1]");
  }
  for (Eigen::Index r = 0; r < w_.rows(); ++r) {
    const double s = w_.row(r).sum();
    if (std::abs(s - 1.0) > tol.atol) {
      throw InvariantError("row-sum", "row " + std::to_string(r) +
                                          " sums to " + fmt_double(s));
    }
  }
  w_ = w_.cwiseMax(0.0).cwiseMin(1.0);
}

StochasticMatrix StochasticMatrix::identity(const OutcomeSpace &outcomes) {
  const auto n = static_cast<Eigen::Index>(outcomes.size());
  return StochasticMatrix(outcomes, Eigen::MatrixXd::Identity(n, n));
}

StochasticMatrix then(const StochasticMatrix &lam, const StochasticMatrix &mu,
                      Tolerance tol) {
  if (lam.cols() != mu.rows()) {
    throw DimensionError("then: inner outcome counts differ");
  }
  return StochasticMatrix(mu.targets(), lam.weights() * mu.weights(), tol);
}

// OutcomeMap --------------------------------------------------------------

OutcomeMap::OutcomeMap(
    const std::vector<std::pair<std::string, std::string>> &mapping,
    OutcomeSpace targets)
    : targets_(std::move(targets)) {
  std::vector<std::string> src;
  src.reserve(mapping.size());
  std::vector<bool> hit(targets_.size(), false);
  for (const auto &[from, to] : mapping) {
    src.push_back(from);
    const std::size_t j = targets_.index_of(to);
    image_.push_back(j);
    hit[j] = true;
  }
  sources_ = OutcomeSpace(std::move(src));
  for (std::size_t j = 0; j < hit.size(); ++j) {
    if (!hit[j]) {
      throw InvariantError("surjective", "no source maps to '" +
                                             targets_.label(j) + "'");
    }
  }
}

OutcomeMap OutcomeMap::identity(const OutcomeSpace &outcomes) {
  std::vector<std::pair<std::string, std::string>> m;
  for (const auto &l : outcomes.labels()) m.emplace_back(l, l);
  return OutcomeMap(m, outcomes);
}

OutcomeMap OutcomeMap::first_projection(const OutcomeSpace &first,
                                        const OutcomeSpace &second) {
  std::vector<std::pair<std::string, std::string>> m;
  for (const auto &x : first.labels()) {
    for (const auto &y : second.labels()) m.emplace_back(x + "⊗" + y, x);
  }
  return OutcomeMap(m, first);
}

OutcomeMap OutcomeMap::second_projection(const OutcomeSpace &first,
                                         const OutcomeSpace &second) {
  std::vector<std::pair<std::string, std::string>> m;
  for (const auto &x : first.labels()) {
    for (const auto &y : second.labels()) m.emplace_back(x + "⊗" + y, y);
  }
  return OutcomeMap(m, second);
}

const std::string &OutcomeMap::operator()(const std::string &source) const {
  return targets_.label(image_[sources_.index_of(source)]);
}

OutcomeMap compose(const OutcomeMap &g, const OutcomeMap &f) {
  std::vector<std::pair<std::string, std::string>> m;
  m.reserve(f.sources().size());
  for (const auto &x : f.sources().labels()) m.emplace_back(x, g(f(x)));
  return OutcomeMap(m, g.targets());
}

// Operations --------------------------------------------------------------

double born_probability(const State &rho, const Effect &a, Tolerance tol) {
  if (rho.dim() != a.dim()) {
    throw DimensionError("born_probability: state dim " +
                         std::to_string(rho.dim()) + " vs effect dim " +
                         std::to_string(a.dim()));
  }
  const Complex p = trace_product(rho.matrix(), a.matrix());
  if (std::abs(p.imag()) > tol.atol) {
    throw InvariantError("real-probability",
                         "tr(rho a) has imaginary part " +
                             fmt_double(p.imag()));
  }
  return p.real();
}

double observable_distribution(const State &rho, const Observable &A,
                               const std::vector<std::string> &subset,
                               Tolerance tol) {
  double p = 0.0;
  for (std::size_t i : A.outcomes().indices_of(subset)) {
    p += born_probability(rho, A[i], tol);
  }
  return p;
}

Observable post_process(const Observable &A, const StochasticMatrix &lam,
                        Tolerance tol) {
  if (lam.rows() != A.size()) {
    throw DimensionError("post_process: kernel has " +
                         std::to_string(lam.rows()) + " rows for " +
                         std::to_string(A.size()) + " outcomes");
  }
  std::vector<CMatrix> out(lam.cols(), zeros(A.dim(), A.dim()));
  for (std::size_t x = 0; x < A.size(); ++x) {
    for (std::size_t y = 0; y < lam.cols(); ++y) {
      out[y] += lam(x, y) * A[x].matrix();
    }
  }
  return Observable(lam.targets(), out, tol);
}

Observable part(const Observable &A, const OutcomeMap &f, Tolerance tol) {
  const OutcomeSpace &targets = f.targets();
  std::vector<CMatrix> out(targets.size(), zeros(A.dim(), A.dim()));
  std::vector<bool> hit(targets.size(), false);
  for (std::size_t x = 0; x < A.size(); ++x) {
    const std::size_t y = targets.index_of(f(A.outcomes().label(x)));
    out[y] += A[x].matrix();
    hit[y] = true;
  }
  for (std::size_t y = 0; y < hit.size(); ++y) {
    if (!hit[y]) {
      throw InvariantError("surjective", "map misses '" + targets.label(y) +
                                             "' on the observable's outcomes");
    }
  }
  return Observable(targets, out, tol);
}

std::pair<Observable, Observable> marginals(const BiObservable &C,
                                            Tolerance tol) {
  const std::size_t n1 = C.first().size();
  const std::size_t n2 = C.second().size();
  std::vector<CMatrix> m1(n1, zeros(C.dim(), C.dim()));
  std::vector<CMatrix> m2(n2, zeros(C.dim(), C.dim()));
  for (std::size_t x = 0; x < n1; ++x) {
    for (std::size_t y = 0; y < n2; ++y) {
      m1[x] += C(x, y).matrix();
      m2[y] += C(x, y).matrix();
    }
  }
  return {Observable(C.first(), m1, tol), Observable(C.second(), m2, tol)};
}

Observable affine_combination(const std::vector<Observable> &As,
                              const std::vector<double> &weights,
                              Tolerance tol) {
  if (As.empty() || As.size() != weights.size()) {
    throw InvariantError("weights", "need one weight per observable");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= -tol.atol && w <= 1.0 + tol.atol)) {
      throw InvariantError("weights", "weight outside [0, 1]");
    }
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > tol.atol) {
    throw InvariantError("weights", "weights sum to " + fmt_double(wsum));
  }
  const Observable &first = As.front();
  std::vector<CMatrix> out(first.size(), zeros(first.dim(), first.dim()));
  for (std::size_t i = 0; i < As.size(); ++i) {
    if (!(As[i].outcomes() == first.outcomes()) || As[i].dim() != first.dim()) {
      throw InvariantError("outcomes",
                           "affine combination needs matching outcome spaces");
    }
    for (std::size_t x = 0; x < first.size(); ++x) {
      out[x] += weights[i] * As[i][x].matrix();
    }
  }
  return Observable(first.outcomes(), out, tol);
}

bool certify_coexistence(const Observable &A, const Observable &B,
                         const BiObservable &C, Tolerance tol) {
  if (A.dim() != C.dim() || B.dim() != C.dim()) return false;
  if (!(A.outcomes() == C.first()) || !(B.outcomes() == C.second())) {
    return false;
  }
  const auto [m1, m2] = marginals(C, tol);
  return max_deviation(A, m1) <= tol.atol && max_deviation(B, m2) <= tol.atol;
}

double max_deviation(const Observable &A, const Observable &B) {
  if (!(A.outcomes() == B.outcomes()) || A.dim() != B.dim()) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  for (std::size_t x = 0; x < A.size(); ++x) {
    dev = std::max(dev, max_abs_diff(A[x].matrix(), B[x].matrix()));
  }
  return dev;
}

}  // namespace qcond
