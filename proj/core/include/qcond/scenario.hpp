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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qcond/channels.hpp"
#include "qcond/effects.hpp"
#include "qcond/errors.hpp"
#include "qcond/instruments.hpp"
#include "qcond/measmodel.hpp"

namespace qcond {

/// A name in the scenario refers to nothing, or to an object of the wrong
/// type.
class ReferenceError : public Error {
 public:
  explicit ReferenceError(const std::string &message) : Error(message) {}
};

using ScenarioObject = std::variant<State, Effect, Observable, Operation,
                                    Channel, Instrument, MeasurementModel>;

/// "state", "effect", "observable", "operation", "channel", "instrument" or
/// "measurement_model".
std::string type_name(const ScenarioObject &obj);

/**
 * Named collection of validated objects.
 *
 * File format (JSON):
 *
 *     {
 *       "tolerance": 1e-9,            // optional
 *       "seed": 7,                    // optional
 *       "objects": {
 *         "rho": {"type": "state", "matrix": [[[0.5,0],[0,0]],
 *                                             [[0,0],[0.5,0]]]},
 *         "A":   {"type": "observable", "outcomes": ["0","1"],
 *                 "effects": [M0, M1]},
 *         "K":   {"type": "channel", "kraus": [K0, K1]},
 *         "I":   {"type": "instrument", "outcomes": ["a","b"],
 *                 "operations": ["opA", {"kraus": [...]}]},
 *         "M":   {"type": "measurement_model", "dim_h": 2, "dim_k": 2,
 *                 "interaction": "I", "probe": "P"}
 *       }
 *     }
 *
 * Complex entries are [re, im] (a bare number is read as real). Matrices
 * are row-major nested arrays. Instrument operations and the interaction
 * and probe of a model may be given inline or by name.
 */
struct Scenario {
  Tolerance tol;
  std::optional<std::uint64_t> seed;
  std::map<std::string, ScenarioObject> objects;

  bool contains(const std::string &name) const {
    return objects.count(name) != 0;
  }

  /// Typed lookup; throws ReferenceError on a missing name or wrong type.
  /// A Channel is also returned when an Operation is requested.
  template <class T>
  const T &get(const std::string &name) const;
};

/// `tol_override` wins over the file's "tolerance", which wins over
/// QCOND_TOL, which wins over 1e-9.
Scenario parse_scenario(std::string_view json_text,
                        std::optional<Tolerance> tol_override = std::nullopt);
Scenario load_scenario(const std::filesystem::path &path,
                       std::optional<Tolerance> tol_override = std::nullopt);

/// Canonical JSON: objects sorted by name, references inlined.
std::string dump_scenario(const Scenario &s);
void save_scenario(const Scenario &s, const std::filesystem::path &path);

/// Largest entrywise difference between same-named objects; +inf if the
/// name sets or object types differ.
double max_deviation(const Scenario &a, const Scenario &b);

extern template const State &Scenario::get<State>(const std::string &) const;
extern template const Effect &Scenario::get<Effect>(const std::string &) const;
extern template const Observable &Scenario::get<Observable>(
    const std::string &) const;
extern template const Operation &Scenario::get<Operation>(
    const std::string &) const;
extern template const Channel &Scenario::get<Channel>(
    const std::string &) const;
extern template const Instrument &Scenario::get<Instrument>(
    const std::string &) const;
extern template const MeasurementModel &Scenario::get<MeasurementModel>(
    const std::string &) const;

}  // namespace qcond
