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

// qcond: validate scenario files, evaluate distributions and measurement
// models, and run the identity-check registry.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qcond/checks.hpp"
#include "qcond/measmodel.hpp"
#include "qcond/scenario.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qcond;

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

ordered_json to_json(const CMatrix &m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_complex(Complex z) {
  char buf[64];
  if (std::abs(z.imag()) < 1e-15) {
    std::snprintf(buf, sizeof buf, "%.6g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  }
  return buf;
}

void print_matrix(std::ostream &out, const CMatrix &m, const std::string &indent) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << indent << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << (c ? ", " : " ") << format_complex(m(r, c));
    }
    out << " ]\n";
  }
}

Tolerance pick_tol(std::optional<double> tol) {
  Tolerance t = Tolerance::from_env();
  if (tol) t.atol = *tol;
  return t;
}

std::optional<Tolerance> override_tol(std::optional<double> tol) {
  if (!tol) return std::nullopt;
  return Tolerance{*tol};
}

// "2..3" or "2"
bool parse_dims(const std::string &s, std::size_t &lo, std::size_t &hi) {
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoul(s, &used);
      return used == s.size();
    }
    const std::string a = s.substr(0, dots);
    const std::string b = s.substr(dots + 2);
    lo = std::stoul(a, &used);
    if (used != a.size()) return false;
    hi = std::stoul(b, &used);
    return used == b.size();
  } catch (const std::exception &) {
    return false;
  }
}

int cmd_validate(const std::string &file, std::optional<double> tol) {
  const Scenario s = load_scenario(file, override_tol(tol));
  std::cout << "ok: " << file << " (" << s.objects.size() << " objects, tol "
            << s.tol.atol << ")\n";
  for (const auto &[name, obj] : s.objects) {
    std::cout << "  " << name << ": " << type_name(obj) << "\n";
  }
  return 0;
}

int cmd_check(const std::vector<std::string> &suite, std::size_t trials,
              const std::string &dims, std::uint64_t seed,
              std::optional<double> tol, const std::string &format,
              bool timing, unsigned threads) {
  CheckOptions opts;
  opts.suite = suite;
  opts.trials = trials;
  opts.seed = seed;
  opts.tol = pick_tol(tol);
  opts.threads = threads;
  if (!parse_dims(dims, opts.dim_min, opts.dim_max)) {
    std::cerr << "error: --dims expects A..B, got '" << dims << "'\n";
    return kExitError;
  }
  const CheckReport report = run_checks(opts);
  std::cout << (format == "json" ? report_json(report, timing)
                                 : report_text(report, timing));
  return report.all_passed() ? 0 : kExitFail;
}

int cmd_distribution(const std::string &file, const std::string &obs,
                     const std::string &state, std::optional<double> tol,
                     const std::string &format) {
  const Scenario s = load_scenario(file, override_tol(tol));
  const Observable &A = s.get<Observable>(obs);
  const State &rho = s.get<State>(state);
  ordered_json out;
  out["observable"] = obs;
  out["state"] = state;
  ordered_json probs = ordered_json::object();
  double total = 0.0;
  for (std::size_t x = 0; x < A.size(); ++x) {
    const double p = born_probability(rho, A[x], s.tol);
    probs[A.outcomes().label(x)] = p;
    total += p;
  }
  out["distribution"] = probs;
  out["total"] = total;
  if (format == "json") {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "distribution of " << obs << " in " << state << "\n";
  for (const auto &[label, p] : probs.items()) {
    std::cout << "  " << label << "  " << p.get<double>() << "\n";
  }
  std::cout << "  total  " << total << "\n";
  return 0;
}

int cmd_measure(const std::string &file, const std::string &model,
                const std::string &state, std::optional<double> tol,
                const std::string &format) {
  const Scenario s = load_scenario(file, override_tol(tol));
  const MeasurementModel &m = s.get<MeasurementModel>(model);
  const State rho =
      state.empty() ? State::maximally_mixed(m.dim_h) : s.get<State>(state);

  const Observable pointer = measured_pointer_observable(m, s.tol);
  const MapInstrument j2 = measured_instrument(m, s.tol);

  ordered_json out;
  out["model"] = model;
  out["dim_h"] = m.dim_h;
  out["dim_k"] = m.dim_k;
  out["state"] = state.empty() ? "maximally_mixed" : state;
  ordered_json p_json = ordered_json::object();
  for (std::size_t y = 0; y < pointer.size(); ++y) {
    p_json[pointer.outcomes().label(y)] = to_json(pointer[y].matrix());
  }
  out["pointer_observable"] = std::move(p_json);
  ordered_json j_json = ordered_json::object();
  for (std::size_t y = 0; y < j2.size(); ++y) {
    const CMatrix image = qcond::apply(j2[y], rho);
    ordered_json e;
    e["probability"] = trace(image).real();
    e["output"] = to_json(image);
    j_json[j2.outcomes().label(y)] = std::move(e);
  }
  out["instrument"] = std::move(j_json);
  if (format == "json") {
    std::cout << out.dump() << "\n";
    return 0;
  }
  std::cout << "model " << model << " (dim_h " << m.dim_h << ", dim_k "
            << m.dim_k << "), input "
            << (state.empty() ? "maximally mixed" : state) << "\n";
  std::cout << "pointer observable:\n";
  for (std::size_t y = 0; y < pointer.size(); ++y) {
    std::cout << "  " << pointer.outcomes().label(y) << ":\n";
    print_matrix(std::cout, pointer[y].matrix(), "    ");
  }
  std::cout << "measured instrument:\n";
  for (std::size_t y = 0; y < j2.size(); ++y) {
    const CMatrix image = qcond::apply(j2[y], rho);
    std::cout << "  " << j2.outcomes().label(y) << ": probability "
              << trace(image).real() << "\n";
    print_matrix(std::cout, image, "    ");
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"qcond: conditioning of quantum observables and instruments"};
  app.require_subcommand(1);

  std::optional<double> tol;
  auto add_tol = [&](CLI::App *sub) {
    sub->add_option("--tol", tol, "absolute tolerance (default: $QCOND_TOL or 1e-9)")
        ->check(CLI::PositiveNumber);
  };

  std::string file;
  auto *validate = app.add_subcommand("validate", "load and validate a scenario file");
  validate->add_option("file", file, "scenario JSON")->required();
  add_tol(validate);

  std::vector<std::string> suite{"all"};
  std::size_t trials = 100;
  std::string dims = "2..3";
  std::uint64_t seed = 0;
  std::string format = "text";
  bool timing = false;
  unsigned threads = 0;
  auto *check = app.add_subcommand("check", "run registered identities on random instances");
  check->add_option("--suite", suite, "identity names or 'all'")->delimiter(',');
  check->add_option("--trials", trials, "instances per dimension");
  check->add_option("--dims", dims, "dimension range A..B");
  check->add_option("--seed", seed, "root seed");
  check->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  check->add_flag("--timing", timing, "include elapsed times in the report");
  check->add_option("--threads", threads, "worker threads (0: all cores)");
  add_tol(check);

  std::string scenario;
  std::string observable;
  std::string state;
  auto *dist = app.add_subcommand("distribution", "outcome distribution of an observable");
  dist->add_option("--scenario", scenario)->required();
  dist->add_option("--observable", observable)->required();
  dist->add_option("--state", state)->required();
  dist->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  add_tol(dist);

  std::string model;
  auto *measure = app.add_subcommand("measure", "pointer observable and measured instrument of a model");
  measure->add_option("--scenario", scenario)->required();
  measure->add_option("--model", model)->required();
  measure->add_option("--state", state, "input state (default: maximally mixed)");
  measure->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  add_tol(measure);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file, tol);
    if (*check) {
      return cmd_check(suite, trials, dims, seed, tol, format, timing, threads);
    }
    if (*dist) return cmd_distribution(scenario, observable, state, tol, format);
    if (*measure) return cmd_measure(scenario, model, state, tol, format);
  } catch (const qcond::InvariantError &e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitFail;
  } catch (const qcond::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
