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

#include <stdexcept>
#include <string>

namespace qcond {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &message) : std::runtime_error(message) {}
};

/// Shapes of operands do not line up.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string &message) : Error(message) {}
};

/// A constructed value violates one of its type invariants. `invariant()`
/// is a short machine-friendly tag such as "normalization" or "psd".
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, const std::string &message)
      : Error(invariant + ": " + message), invariant_(std::move(invariant)) {}

  const std::string &invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string &label)
      : Error("unknown outcome label '" + label + "'"), label_(label) {}

  const std::string &label() const { return label_; }

 private:
  std::string label_;
};

/// Raised by updated_state when the outcome has (numerically) zero
/// probability in the given state.
class OutcomeNotObserved : public Error {
 public:
  explicit OutcomeNotObserved(const std::string &label)
      : Error("outcome '" + label + "' has zero probability"), label_(label) {}

  const std::string &label() const { return label_; }

 private:
  std::string label_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string &message) : Error(message) {}
};

}  // namespace qcond
