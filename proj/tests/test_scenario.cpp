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


#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcond/checks.hpp"
#include "qcond/random.hpp"
#include "qcond/scenario.hpp"

namespace qcond {
namespace {

std::string data_path(const std::string &name) {
  return std::string(QCOND_TEST_DATA) + "/" + name;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Random, SplitStreamsAreReproducibleAndDistinct) {
  SplitMix64 a(42);
  SplitMix64 b(42);
  EXPECT_EQ(a.split(3)(), b.split(3)());
  EXPECT_NE(a.split(3)(), a.split(4)());
  EXPECT_EQ(stream_id("dual.duality"), stream_id("dual.duality"));
  EXPECT_NE(stream_id("dual.duality"), stream_id("dual.additivity"));
}

TEST(Random, UniformAndBelowStayInRange) {
  SplitMix64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
}

TEST(Random, StateIsValidAndSeeded) {
  for (std::size_t d = 1; d <= 4; ++d) {
    const State s = random_state(d, 9);
    EXPECT_NEAR(oracle::trace(s.matrix()).real(), 1.0, 1e-12);
    EXPECT_EQ(oracle::max_abs_diff(s.matrix(), random_state(d, 9).matrix()), 0.0);
  }
  EXPECT_NEAR(random_state(1, 3).matrix()(0, 0).real(), 1.0, 1e-15);
}

TEST(Random, SingleOutcomeObservableIsIdentity) {
  const Observable a = random_observable(3, 1, 5);
  EXPECT_LT(oracle::max_abs_diff(a[0].matrix(), CMatrix::Identity(3, 3)), 1e-12);
}

TEST(Random, ObservableSumsToIdentity) {
  const Observable a = random_observable(3, 4, 11);
  CMatrix sum = CMatrix::Zero(3, 3);
  for (std::size_t x = 0; x < a.size(); ++x) sum += a[x].matrix();
  EXPECT_LT(oracle::max_abs_diff(sum, CMatrix::Identity(3, 3)), 1e-12);
}

TEST(Random, OneByOneChannelIsAPhase) {
  const Channel c = random_channel(1, 1, 1, 2);
  ASSERT_EQ(c.kraus().size(), 1u);
  EXPECT_NEAR(std::abs(c.kraus()[0](0, 0)), 1.0, 1e-12);
}

TEST(Random, ChannelIsTracePreserving) {
  const Channel c = random_channel(2, 3, 3, 4);
  const CMatrix rho = random_state(2, 8).matrix();
  EXPECT_NEAR(oracle::trace(oracle::kraus_apply(c.kraus(), rho)).real(), 1.0,
              1e-12);
}

TEST(Random, SingleOutcomeInstrumentIsAChannel) {
  const Instrument i = random_instrument(2, 2, 1, 6);
  ASSERT_EQ(i.size(), 1u);
  EXPECT_TRUE(is_trace_preserving(i[0]));
}

TEST(Scenario, LoadsFixture) {
  const Scenario s = load_scenario(data_path("qubit_model.json"));
  EXPECT_TRUE(s.contains("pointer"));
  EXPECT_EQ(type_name(s.objects.at("pointer")), "measurement_model");
  const Observable &z = s.get<Observable>("Z");
  EXPECT_EQ(z.size(), 2u);
  EXPECT_THROW(s.get<State>("Z"), ReferenceError);
  EXPECT_THROW(s.get<State>("nope"), ReferenceError);
}

TEST(Scenario, BrokenPovmReportsNormalization) {
  try {
    load_scenario(data_path("broken_povm.json"));
    FAIL() << "expected InvariantError";
  } catch (const InvariantError &e) {
    EXPECT_EQ(e.invariant(), "normalization");
    EXPECT_NE(std::string(e.what()).find("leaky"), std::string::npos);
  }
}

TEST(Scenario, DanglingReferenceIsReported) {
  try {
    load_scenario(data_path("dangling.json"));
    FAIL() << "expected ReferenceError";
  } catch (const ReferenceError &e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
}

TEST(Scenario, MalformedJsonIsAParseError) {
  EXPECT_THROW(parse_scenario("{\"objects\": "), ParseError);
  EXPECT_THROW(parse_scenario("{\"objects\": {\"x\": {\"type\": \"spoon\"}}}"),
               ParseError);
}

TEST(Scenario, ReferenceCycleIsRejected) {
  const char *text = R"({"objects": {
    "m": {"type": "measurement_model", "dim_h": 2, "dim_k": 2,
          "interaction": "m", "probe": "m"}}})";
  EXPECT_THROW(parse_scenario(text), Error);
}

TEST(Scenario, RoundTripIsExact) {
  const Scenario s = load_scenario(data_path("qubit_model.json"));
  const Scenario back = parse_scenario(dump_scenario(s));
  EXPECT_EQ(max_deviation(s, back), 0.0);
  EXPECT_EQ(dump_scenario(back), dump_scenario(s));
}

TEST(Scenario, ToleranceOverrideWins) {
  const char *text = R"({"tolerance": 0.05, "objects": {
    "leaky": {"type": "observable", "outcomes": ["a", "b"],
              "effects": [[[1, 0], [0, 0]], [[0, 0], [0, 0.99]]]}}})";
  EXPECT_NO_THROW(parse_scenario(text));
  EXPECT_THROW(parse_scenario(text, Tolerance{1e-9}), InvariantError);
}

TEST(Scenario, DeviationIsInfiniteOnNameMismatch) {
  const Scenario s = load_scenario(data_path("qubit_model.json"));
  Scenario t = s;
  t.objects.erase("pointer");
  EXPECT_TRUE(std::isinf(max_deviation(s, t)));
}

TEST(Checks, RegistryIsSortedAndNamed) {
  const auto &ids = registered_identities();
  ASSERT_FALSE(ids.empty());
  for (std::size_t i = 1; i < ids.size(); ++i) {
    EXPECT_LT(ids[i - 1].name, ids[i].name);
  }
  for (const auto &id : ids) {
    EXPECT_FALSE(id.anchor.empty()) << id.name;
    EXPECT_EQ(&find_identity(id.name), &id);
  }
  EXPECT_THROW(find_identity("no.such.identity"), UnknownIdentity);
}

TEST(Checks, SingleIdentityPasses) {
  CheckOptions opts;
  opts.suite = {"dual.duality"};
  opts.trials = 10;
  opts.threads = 1;
  const CheckReport r = run_checks(opts);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].instances, 20u);
  EXPECT_TRUE(r.all_passed());
}

TEST(Checks, AllCoversEveryIdentity) {
  CheckOptions opts;
  opts.trials = 2;
  opts.dim_min = 2;
  opts.dim_max = 2;
  const CheckReport r = run_checks(opts);
  ASSERT_EQ(r.records.size(), registered_identities().size());
  for (const auto &rec : r.records) {
    EXPECT_EQ(rec.instances, 2u);
    EXPECT_TRUE(rec.passed) << rec.name << ": " << rec.error;
  }
}

TEST(Checks, ZeroTrialsGivesEmptyReport) {
  CheckOptions opts;
  opts.trials = 0;
  EXPECT_TRUE(run_checks(opts).records.empty());
}

TEST(Checks, UnknownSuiteNameThrows) {
  CheckOptions opts;
  opts.suite = {"dual.duality", "bogus"};
  EXPECT_THROW(run_checks(opts), UnknownIdentity);
}

TEST(Checks, JsonIsIndependentOfThreadCount) {
  CheckOptions opts;
  opts.suite = {"conditioning.distribution", "holevo.composition"};
  opts.trials = 5;
  opts.seed = 3;
  opts.threads = 1;
  const std::string one = report_json(run_checks(opts));
  opts.threads = 4;
  EXPECT_EQ(report_json(run_checks(opts)), one);
}

TEST(Checks, ImpossibleToleranceFails) {
  CheckOptions opts;
  opts.suite = {"conditioning.unitary_inverse"};
  opts.trials = 5;
  opts.tol = Tolerance{1e-300};
  const CheckReport r = run_checks(opts);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_FALSE(r.all_passed());
}

}  // namespace
}  // namespace qcond
