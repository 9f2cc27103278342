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

#include "qcond/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qcond {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// JSON <-> matrices

Complex complex_from_json(const json &j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a number or [re, im] pair, got " + j.dump());
}

CMatrix matrix_from_json(const json &j) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("matrix must be a nonempty array of rows");
  }
  const auto rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError("matrix rows must be nonempty arrays");
  }
  const auto cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError("matrix is ragged at row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json matrix_to_json(const CMatrix &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const json &require(const json &obj, const char *key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return obj.at(key);
}

std::vector<CMatrix> matrices_from_json(const json &j, const char *what) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(std::string(what) + " must be a nonempty array");
  }
  std::vector<CMatrix> out;
  for (const auto &m : j) out.push_back(matrix_from_json(m));
  return out;
}

OutcomeSpace outcomes_from_json(const json &j) {
  if (!j.is_array()) throw ParseError("outcomes must be an array of labels");
  std::vector<std::string> labels;
  for (const auto &l : j) {
    if (l.is_string()) {
      labels.push_back(l.get<std::string>());
    } else if (l.is_number_integer()) {
      labels.push_back(std::to_string(l.get<long long>()));
    } else {
      throw ParseError("outcome labels must be strings or integers");
    }
  }
  return OutcomeSpace(std::move(labels));
}

std::size_t dim_from_json(const json &j, const char *key) {
  const json &v = require(j, key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw ParseError(std::string("\"") + key + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

json outcomes_to_json(const OutcomeSpace &o) { return o.labels(); }

json kraus_to_json(const Operation &op) {
  json ks = json::array();
  for (const auto &k : op.kraus()) ks.push_back(matrix_to_json(k));
  return ks;
}

json observable_body(const Observable &A) {
  json effects = json::array();
  for (const auto &e : A.effects()) effects.push_back(matrix_to_json(e.matrix()));
  return {{"outcomes", outcomes_to_json(A.outcomes())}, {"effects", effects}};
}

json instrument_body(const Instrument &ins) {
  json ops = json::array();
  for (const auto &op : ins.ops()) ops.push_back({{"kraus", kraus_to_json(op)}});
  return {{"outcomes", outcomes_to_json(ins.outcomes())}, {"operations", ops}};
}

json object_to_json(const ScenarioObject &obj) {
  return std::visit(
      [](const auto &o) -> json {
        using T = std::decay_t<decltype(o)>;
        json j;
        if constexpr (std::is_same_v<T, State>) {
          j = {{"type", "state"}, {"matrix", matrix_to_json(o.matrix())}};
        } else if constexpr (std::is_same_v<T, Effect>) {
          j = {{"type", "effect"}, {"matrix", matrix_to_json(o.matrix())}};
        } else if constexpr (std::is_same_v<T, Observable>) {
          j = observable_body(o);
          j["type"] = "observable";
        } else if constexpr (std::is_same_v<T, Channel>) {
          j = {{"type", "channel"}, {"kraus", kraus_to_json(o)}};
        } else if constexpr (std::is_same_v<T, Operation>) {
          j = {{"type", "operation"}, {"kraus", kraus_to_json(o)}};
        } else if constexpr (std::is_same_v<T, Instrument>) {
          j = instrument_body(o);
          j["type"] = "instrument";
        } else {
          json inter = instrument_body(o.interaction);
          inter["type"] = "instrument";
          json probe = observable_body(o.probe);
          probe["type"] = "observable";
          j = {{"type", "measurement_model"},
               {"dim_h", o.dim_h},
               {"dim_k", o.dim_k},
               {"interaction", inter},
               {"probe", probe}};
        }
        return j;
      },
      obj);
}

// ---------------------------------------------------------------------------
// Loader

const std::set<std::string> kTypes = {"state",      "effect",  "observable",
                                      "operation",  "channel", "instrument",
                                      "measurement_model"};

class Loader {
 public:
  Loader(const json &objects, Tolerance tol) : objects_(objects), tol_(tol) {}

  std::map<std::string, ScenarioObject> run() {
    for (const auto &[name, body] : objects_.items()) build(name);
    return std::move(done_);
  }

 private:
  const ScenarioObject &build(const std::string &name) {
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (in_progress_.count(name)) {
      throw ReferenceError("object '" + name + "': circular reference");
    }
    in_progress_.insert(name);
    const json &body = objects_.at(name);
    ScenarioObject obj = with_context(name, [&] { return make(name, body); });
    in_progress_.erase(name);
    return done_.emplace(name, std::move(obj)).first->second;
  }

  template <class F>
  ScenarioObject with_context(const std::string &name, F &&f) {
    const std::string where = "object '" + name + "'";
    try {
      return f();
    } catch (const InvariantError &e) {
      std::string msg = e.what();
      const std::string prefix = e.invariant() + ": ";
      if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
      throw InvariantError(e.invariant(), where + ": " + msg);
    } catch (const ReferenceError &) {
      throw;
    } catch (const DimensionError &e) {
      throw DimensionError(where + ": " + e.what());
    } catch (const ParseError &e) {
      throw ParseError(where + ": " + e.what());
    } catch (const UnknownLabel &e) {
      throw ParseError(where + ": " + e.what());
    } catch (const json::exception &e) {
      throw ParseError(where + ": " + e.what());
    }
  }

  std::string type_of(const json &body) const {
    const json &t = require(body, "type");
    if (!t.is_string() || !kTypes.count(t.get<std::string>())) {
      throw ParseError("unknown type " + t.dump());
    }
    return t.get<std::string>();
  }

  const ScenarioObject &resolve(const std::string &owner,
                                const std::string &ref) {
    if (!objects_.contains(ref)) {
      throw ReferenceError("object '" + owner + "': dangling reference '" +
                           ref + "'");
    }
    return build(ref);
  }

  Operation operation_from(const std::string &owner, const json &j) {
    if (j.is_string()) {
      const auto &ref = resolve(owner, j.get<std::string>());
      if (const auto *op = std::get_if<Operation>(&ref)) return *op;
      if (const auto *ch = std::get_if<Channel>(&ref)) return *ch;
      throw ReferenceError("object '" + owner + "': '" + j.get<std::string>() +
                           "' is not an operation");
    }
    return Operation(matrices_from_json(require(j, "kraus"), "kraus"), tol_);
  }

  Instrument instrument_from(const std::string &owner, const json &j) {
    if (j.is_string()) {
      const auto &ref = resolve(owner, j.get<std::string>());
      if (const auto *ins = std::get_if<Instrument>(&ref)) return *ins;
      throw ReferenceError("object '" + owner + "': '" + j.get<std::string>() +
                           "' is not an instrument");
    }
    const json &ops_j = require(j, "operations");
    if (!ops_j.is_array()) throw ParseError("operations must be an array");
    std::vector<Operation> ops;
    for (const auto &o : ops_j) ops.push_back(operation_from(owner, o));
    return Instrument(outcomes_from_json(require(j, "outcomes")), std::move(ops),
                      tol_);
  }

  Observable observable_from(const std::string &owner, const json &j) {
    if (j.is_string()) {
      const auto &ref = resolve(owner, j.get<std::string>());
      if (const auto *A = std::get_if<Observable>(&ref)) return *A;
      throw ReferenceError("object '" + owner + "': '" + j.get<std::string>() +
                           "' is not an observable");
    }
    return Observable(outcomes_from_json(require(j, "outcomes")),
                      matrices_from_json(require(j, "effects"), "effects"),
                      tol_);
  }

  ScenarioObject make(const std::string &name, const json &body) {
    const std::string type = type_of(body);
    if (type == "state") {
      return State(matrix_from_json(require(body, "matrix")), tol_);
    }
    if (type == "effect") {
      return Effect(matrix_from_json(require(body, "matrix")), tol_);
    }
    if (type == "observable") return observable_from(name, body);
    if (type == "operation") return operation_from(name, body);
    if (type == "channel") {
      return Channel(matrices_from_json(require(body, "kraus"), "kraus"), tol_);
    }
    if (type == "instrument") return instrument_from(name, body);
    return MeasurementModel(dim_from_json(body, "dim_h"),
                            dim_from_json(body, "dim_k"),
                            instrument_from(name, require(body, "interaction")),
                            observable_from(name, require(body, "probe")));
  }

  const json &objects_;
  Tolerance tol_;
  std::map<std::string, ScenarioObject> done_;
  std::set<std::string> in_progress_;
};

double operation_deviation(const Operation &a, const Operation &b) {
  if (a.kraus().size() != b.kraus().size()) return kInf;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.kraus().size(); ++i) {
    dev = std::max(dev, max_abs_diff(a.kraus()[i], b.kraus()[i]));
  }
  return dev;
}

double instrument_deviation(const Instrument &a, const Instrument &b) {
  if (a.outcomes() != b.outcomes()) return kInf;
  double dev = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    dev = std::max(dev, operation_deviation(a[x], b[x]));
  }
  return dev;
}

}  // namespace

std::string type_name(const ScenarioObject &obj) {
  static const char *const kNames[] = {"state",   "effect",     "observable",
                                       "operation", "channel", "instrument",
                                       "measurement_model"};
  return kNames[obj.index()];
}

template <class T>
const T &Scenario::get(const std::string &name) const {
  auto it = objects.find(name);
  if (it == objects.end()) {
    throw ReferenceError("no object named '" + name + "'");
  }
  if (const auto *v = std::get_if<T>(&it->second)) return *v;
  if constexpr (std::is_same_v<T, Operation>) {
    if (const auto *ch = std::get_if<Channel>(&it->second)) return *ch;
  }
  throw ReferenceError("object '" + name + "' has type " +
                       type_name(it->second));
}

template const State &Scenario::get<State>(const std::string &) const;
template const Effect &Scenario::get<Effect>(const std::string &) const;
template const Observable &Scenario::get<Observable>(const std::string &) const;
template const Operation &Scenario::get<Operation>(const std::string &) const;
template const Channel &Scenario::get<Channel>(const std::string &) const;
template const Instrument &Scenario::get<Instrument>(const std::string &) const;
template const MeasurementModel &Scenario::get<MeasurementModel>(
    const std::string &) const;

Scenario parse_scenario(std::string_view json_text,
                        std::optional<Tolerance> tol_override) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("scenario must be a JSON object");

  Scenario s;
  s.tol = Tolerance::from_env();
  if (root.contains("tolerance")) {
    const json &t = root["tolerance"];
    if (!t.is_number() || t.get<double>() < 0) {
      throw ParseError("\"tolerance\" must be a nonnegative number");
    }
    s.tol.atol = t.get<double>();
  }
  if (tol_override) s.tol = *tol_override;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw ParseError("\"seed\" must be a nonnegative integer");
    }
    s.seed = root["seed"].get<std::uint64_t>();
  }
  const json objects = root.contains("objects") ? root["objects"] : json::object();
  if (!objects.is_object()) throw ParseError("\"objects\" must be an object");
  s.objects = Loader(objects, s.tol).run();
  return s;
}

Scenario load_scenario(const std::filesystem::path &path,
                       std::optional<Tolerance> tol_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), tol_override);
}

std::string dump_scenario(const Scenario &s) {
  json root;
  root["tolerance"] = s.tol.atol;
  if (s.seed) root["seed"] = *s.seed;
  json objects = json::object();
  for (const auto &[name, obj] : s.objects) objects[name] = object_to_json(obj);
  root["objects"] = std::move(objects);
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario &s, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file " + path.string());
  out << dump_scenario(s);
}

double max_deviation(const Scenario &a, const Scenario &b) {
  if (a.objects.size() != b.objects.size()) return kInf;
  double dev = 0.0;
  for (const auto &[name, oa] : a.objects) {
    auto it = b.objects.find(name);
    if (it == b.objects.end() || it->second.index() != oa.index()) return kInf;
    const ScenarioObject &ob = it->second;
    const double d = std::visit(
        [&](const auto &x) -> double {
          using T = std::decay_t<decltype(x)>;
          const T &y = std::get<T>(ob);
          if constexpr (std::is_same_v<T, State> || std::is_same_v<T, Effect>) {
            return max_abs_diff(x.matrix(), y.matrix());
          } else if constexpr (std::is_same_v<T, Observable>) {
            return max_deviation(x, y);
          } else if constexpr (std::is_same_v<T, Instrument>) {
            return instrument_deviation(x, y);
          } else if constexpr (std::is_same_v<T, MeasurementModel>) {
            if (x.dim_h != y.dim_h || x.dim_k != y.dim_k) return kInf;
            return std::max(instrument_deviation(x.interaction, y.interaction),
                            max_deviation(x.probe, y.probe));
          } else {
            return operation_deviation(x, y);
          }
        },
        oa);
    dev = std::max(dev, d);
  }
  return dev;
}

}  // namespace qcond
