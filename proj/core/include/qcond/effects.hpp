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
#include <string>
#include <utility>
#include <vector>

#include "qcond/matkernel.hpp"

namespace qcond {

/// Ordered set of distinct outcome labels. Declaration order fixes the index
/// of every label, so effect lists, grids and stochastic matrices index
/// deterministically.
class OutcomeSpace {
 public:
  OutcomeSpace() = default;
  explicit OutcomeSpace(std::vector<std::string> labels);

  /// Labels "0", "1", ..., "n-1".
  static OutcomeSpace range(std::size_t n);

  /// Labels "x⊗y" in row-major order (x major).
  static OutcomeSpace product(const OutcomeSpace &first,
                              const OutcomeSpace &second);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string &label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string> &labels() const { return labels_; }

  bool contains(const std::string &label) const;
  /// Throws UnknownLabel.
  std::size_t index_of(const std::string &label) const;
  std::vector<std::size_t> indices_of(
      const std::vector<std::string> &subset) const;

  friend bool operator==(const OutcomeSpace &, const OutcomeSpace &) = default;

 private:
  std::vector<std::string> labels_;
};

/// Density operator: PSD with unit trace.
class State {
 public:
  explicit State(CMatrix m, Tolerance tol = {});

  static State maximally_mixed(std::size_t dim);
  /// |v><v| / <v|v>
  static State pure(const CVector &v, Tolerance tol = {});

  const CMatrix &matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  CMatrix m_;
};

/// Operator a with 0 <= a <= I.
class Effect {
 public:
  explicit Effect(CMatrix m, Tolerance tol = {});

  static Effect identity(std::size_t dim);
  static Effect zero(std::size_t dim);

  /// I - a
  Effect complement(Tolerance tol = {}) const;

  const CMatrix &matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  CMatrix m_;
};

/// Finite labelled family of effects summing to the identity (a POVM).
class Observable {
 public:
  Observable(OutcomeSpace outcomes, std::vector<Effect> effects,
             Tolerance tol = {});
  Observable(OutcomeSpace outcomes, const std::vector<CMatrix> &effects,
             Tolerance tol = {});

  /// The one-outcome observable {I}, labelled "1".
  static Observable trivial(std::size_t dim);

  const OutcomeSpace &outcomes() const { return outcomes_; }
  const std::vector<Effect> &effects() const { return effects_; }
  const Effect &operator[](std::size_t i) const { return effects_.at(i); }
  const Effect &effect(const std::string &label) const;
  std::size_t size() const { return effects_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  OutcomeSpace outcomes_;
  std::vector<Effect> effects_;
  std::size_t dim_ = 0;
};

/// Observable on a product outcome space, stored as a row-major grid.
class BiObservable {
 public:
  BiObservable(OutcomeSpace first, OutcomeSpace second,
               std::vector<Effect> grid, Tolerance tol = {});

  const OutcomeSpace &first() const { return first_; }
  const OutcomeSpace &second() const { return second_; }
  const Effect &operator()(std::size_t x, std::size_t y) const {
    return grid_.at(x * second_.size() + y);
  }
  const std::vector<Effect> &grid() const { return grid_; }
  std::size_t dim() const { return dim_; }

  /// The same effects as a plain Observable on labels "x⊗y".
  Observable flatten(Tolerance tol = {}) const;

 private:
  OutcomeSpace first_;
  OutcomeSpace second_;
  std::vector<Effect> grid_;
  std::size_t dim_ = 0;
};

/// Row-stochastic post-processing kernel. Rows follow the source
/// observable's outcome order; columns are labelled by `targets`.
/// Entries within [-atol, 1 + atol] are accepted and clamped to [0, 1].
class StochasticMatrix {
 public:
  StochasticMatrix(OutcomeSpace targets, Eigen::MatrixXd weights,
                   Tolerance tol = {});

  static StochasticMatrix identity(const OutcomeSpace &outcomes);

  const OutcomeSpace &targets() const { return targets_; }
  const Eigen::MatrixXd &weights() const { return w_; }
  std::size_t rows() const { return static_cast<std::size_t>(w_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(w_.cols()); }
  double operator()(std::size_t x, std::size_t y) const { return w_(x, y); }

 private:
  OutcomeSpace targets_;
  Eigen::MatrixXd w_;
};

/// Kernel of "first lam, then mu": delta_xz = sum_y lam_xy mu_yz.
StochasticMatrix then(const StochasticMatrix &lam, const StochasticMatrix &mu,
                      Tolerance tol = {});

/// Total function between label sets, surjective onto `targets`.
class OutcomeMap {
 public:
  OutcomeMap(const std::vector<std::pair<std::string, std::string>> &mapping,
             OutcomeSpace targets);

  static OutcomeMap identity(const OutcomeSpace &outcomes);
  /// (x, y) -> x and (x, y) -> y on the product labels "x⊗y".
  static OutcomeMap first_projection(const OutcomeSpace &first,
                                     const OutcomeSpace &second);
  static OutcomeMap second_projection(const OutcomeSpace &first,
                                      const OutcomeSpace &second);

  const OutcomeSpace &sources() const { return sources_; }
  const OutcomeSpace &targets() const { return targets_; }

  /// Throws UnknownLabel when `source` is outside the domain.
  const std::string &operator()(const std::string &source) const;

 private:
  OutcomeSpace sources_;
  OutcomeSpace targets_;
  std::vector<std::size_t> image_;
};

/// g after f. Throws UnknownLabel when a target of f is outside g's domain.
OutcomeMap compose(const OutcomeMap &g, const OutcomeMap &f);

/// Born rule tr(rho a).
double born_probability(const State &rho, const Effect &a,
                        Tolerance tol = {});

/// Probability of the outcome subset `subset` (labels of A).
double observable_distribution(const State &rho, const Observable &A,
                               const std::vector<std::string> &subset,
                               Tolerance tol = {});

/// B_y = sum_x lam_xy A_x
Observable post_process(const Observable &A, const StochasticMatrix &lam,
                        Tolerance tol = {});

/// B_y = sum { A_x : f(x) = y }. Rejects maps that miss a target on A's
/// outcomes.
Observable part(const Observable &A, const OutcomeMap &f, Tolerance tol = {});

std::pair<Observable, Observable> marginals(const BiObservable &C,
                                            Tolerance tol = {});

/// B_x = sum_i w_i A_{i,x}; weights must be a probability vector.
Observable affine_combination(const std::vector<Observable> &As,
                              const std::vector<double> &weights,
                              Tolerance tol = {});

/// Checks that C is a joint observable for A and B (certificate check only).
bool certify_coexistence(const Observable &A, const Observable &B,
                         const BiObservable &C, Tolerance tol = {});

/// Largest entrywise gap between matching effects; +inf when the outcome
/// spaces or dimensions differ.
double max_deviation(const Observable &A, const Observable &B);

}  // namespace qcond
