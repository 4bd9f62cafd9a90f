#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliquedyn/dynamics.h"
#include "cliquedyn/error.h"
#include "cliquedyn/io.h"

using namespace cliquedyn;

namespace {

ErrorKind KindOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidArgument;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
  RandomStream s(12);
  for (int i = 0; i < 1000; ++i) {
    const double v = s.Uniform01() * std::pow(10.0, static_cast<int>(s.Below(40)) - 20);
    REQUIRE(ParseDouble(FormatDouble(v), "v") == v);
  }
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, std::numeric_limits<double>::min(),
                   std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0)}) {
    CHECK(ParseDouble(FormatDouble(v), "v") == v);
  }
}

TEST_CASE("strict parsers") {
  CHECK(ParseDouble(" 0.25 ", "x") == 0.25);
  CHECK(KindOf([] { ParseDouble("0.25abc", "x"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { ParseDouble("", "x"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { ParseDouble("nan", "x"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(ParseUnsigned("18446744073709551615", "s") == UINT64_MAX);
  CHECK(KindOf([] { ParseUnsigned("-1", "s"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { ParseUnsigned("1.5", "s"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(ParseDoubleList("0,0.5, 0.9,1", "x0") == std::vector<double>{0.0, 0.5, 0.9, 1.0});
  CHECK(ParseIndexList("1,2", "nodes") == std::vector<std::size_t>{1, 2});
  try {
    ParseDouble("abc", "delta");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }
}

TEST_CASE("config parse, serialize, parse is the identity") {
  const std::string text =
      "# stochastic run\n"
      "n = 20\n"
      "m = 4\n"
      "delta = 0.5\n"
      "eta = 0.2   # trailing comment\n"
      "clique_policy = uniform-excluding-self\n"
      "horizon = 5000\n"
      "trials = 100\n"
      "seed = 12345\n"
      "tol = 1e-7\n"
      "window = 1000\n"
      "\n";
  const ExperimentConfig a = ParseConfig(text);
  CHECK(a.params.n == 20);
  CHECK(a.params.m == 4);
  CHECK(a.params.eta == 0.2);
  CHECK(a.params.clique_policy == CliquePolicy::kUniformExcludingSelf);
  CHECK(a.trials == 100);
  CHECK(a.master_seed == 12345);
  CHECK(a.thresholds.tol == 1e-7);
  CHECK_FALSE(a.thresholds.fluct_threshold.has_value());
  const ExperimentConfig b = ParseConfig(SerializeConfig(a));
  CHECK(a == b);
  CHECK(SerializeConfig(a) == SerializeConfig(b));

  ExperimentConfig c;
  c.params = ModelParams{4, 4, 0.3, 1.0 / 3.0};
  c.initial.kind = InitialKind::kExplicit;
  c.initial.values = {0.0, 0.1, 1.0 / 7.0, 1.0};
  c.thresholds.fluct_threshold = 0.01;
  CHECK(ParseConfig(SerializeConfig(c)) == c);
}

TEST_CASE("config errors") {
  CHECK(KindOf([] { ParseConfig("n = 5\nbogus = 1\n"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { ParseConfig("n 5\n"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { ParseConfig("initial = D9\n"); }) == ErrorKind::kInvalidConfiguration);
  CHECK(KindOf([] { LoadConfigFile("/nonexistent/cliquedyn.cfg"); }) ==
        ErrorKind::kInvalidConfiguration);
}

TEST_CASE("trajectory CSV") {
  const ModelParams p{3, 2, 0.5, 0.3};
  const TrajectoryRecord traj =
      Simulate(p, OpinionVector{{0.1, 0.2, 1.0 / 3.0}, 0}, 5, RngSpec{4});
  std::ostringstream first;
  std::ostringstream second;
  WriteTrajectoryCsv(first, traj);
  WriteTrajectoryCsv(second, Simulate(p, OpinionVector{{0.1, 0.2, 1.0 / 3.0}, 0}, 5, RngSpec{4}));
  CHECK(first.str() == second.str());
  const auto lines = Lines(first.str());
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "t,x_1,x_2,x_3");
  CHECK(lines[1] == "0,0.10000000000000001,0.20000000000000001,0.33333333333333331");
  CHECK(lines[6].rfind("5,", 0) == 0);
}

TEST_CASE("estimate and sweep CSV") {
  ProbabilityEstimate e;
  e.event = "fluctuating";
  e.successes = 0;
  e.failures = 100;
  e.trials = 100;
  e.lower = 0.0;
  e.upper = Wilson(0, 100).upper;
  std::ostringstream out;
  const std::vector<ProbabilityEstimate> es{e};
  WriteEstimateCsv(out, es);
  const auto lines = Lines(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "event,successes,failures,undetermined,trials,point,ci_lo,ci_hi");
  CHECK(lines[1].rfind("fluctuating,0,100,0,100,0,0,0.0369", 0) == 0);

  SweepRow row;
  row.value = 0.2;
  row.fluctuation = e;
  std::ostringstream sweep;
  const std::vector<SweepRow> rows{row};
  WriteSweepCsv(sweep, "eta", rows);
  const auto sl = Lines(sweep.str());
  REQUIRE(sl.size() == 2);
  CHECK(sl[0] == "eta,trials,fluct_rate,ci_lo,ci_hi,undetermined");
  CHECK(sl[1].rfind("0.20000000000000001,100,0,0,", 0) == 0);
}

TEST_CASE("classification and manifest lines are JSON") {
  ExperimentConfig c;
  c.params = ModelParams{6, 3, 0.5, 0.2};
  c.horizon = 200;
  const TrialResult r = RunTrial(c, 0);
  const nlohmann::json j = nlohmann::json::parse(ClassificationJson(r));
  CHECK(j["trial"] == 0);
  CHECK(ParseVerdict(j["verdict"].get<std::string>()).has_value());
  CHECK(j["limits"].size() == 6);
  CHECK(j["initial"].get<std::vector<double>>() == r.initial.values);

  RunManifest m;
  m.command = "simulate";
  m.config_echo = SerializeConfig(c);
  m.tool_version = std::string(kToolVersion);
  m.master_seed = 7;
  m.start_time = UtcTimestamp();
  m.end_time = UtcTimestamp();
  m.outputs = {"traj.csv"};
  const std::string line = m.ToJsonLine();
  CHECK(line.find('\n') == std::string::npos);
  const nlohmann::json mj = nlohmann::json::parse(line);
  CHECK(mj["master_seed"] == 7);
  CHECK(mj["config"] == m.config_echo);
  CHECK(m.start_time.back() == 'Z');
}
