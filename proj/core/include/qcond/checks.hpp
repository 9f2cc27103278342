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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcond/errors.hpp"
#include "qcond/matkernel.hpp"
#include "qcond/random.hpp"

namespace qcond {

class UnknownIdentity : public Error {
 public:
  explicit UnknownIdentity(const std::string &name)
      : Error("unknown identity '" + name + "'"), name_(name) {}

  const std::string &name() const { return name_; }

 private:
  std::string name_;
};

/// One random instance of an identity at dimension `dim`; returns the
/// largest absolute deviation between the two sides.
using IdentityFn = double (*)(std::size_t dim, SplitMix64 &rng, Tolerance tol);

struct Identity {
  std::string name;
  std::string anchor;       // the result the identity exercises
  std::string description;
  IdentityFn run;
  /// Tighter bound for identities that involve no spectral steps.
  std::optional<double> bound;
};

/// All identities, sorted by name.
const std::vector<Identity> &registered_identities();
const Identity &find_identity(const std::string &name);

struct CheckOptions {
  std::vector<std::string> suite{"all"};
  std::size_t trials = 100;
  std::size_t dim_min = 2;
  std::size_t dim_max = 3;
  std::uint64_t seed = 0;
  Tolerance tol{};
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct CheckRecord {
  std::string name;
  std::string anchor;
  std::size_t instances = 0;
  double max_deviation = 0.0;  // +inf if an instance threw
  double tolerance = 0.0;
  bool passed = true;
  std::string error;  // first exception message, if any
  double elapsed_ms = 0.0;
};

struct CheckReport {
  CheckOptions options;
  std::vector<CheckRecord> records;  // sorted by name

  bool all_passed() const;
};

/// Expands "all", rejects unknown names, and runs `trials` instances per
/// dimension in [dim_min, dim_max]. Instance (identity, dim, trial) draws
/// from its own stream split off `seed`. Results are independent of the
/// thread count. trials == 0 yields an empty report.
CheckReport run_checks(const CheckOptions &opts);

/// Machine-readable report. Elapsed times are included only on request.
std::string report_json(const CheckReport &r, bool include_timing = false);
std::string report_text(const CheckReport &r, bool include_timing = true);

}  // namespace qcond
