#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "cliquedyn/dynamics.h"
#include "cliquedyn/error.h"

using namespace cliquedyn;

namespace {

CliqueDraw FullCliques(std::size_t n, std::uint64_t time = 0) {
  CliqueDraw draw(n, n, time);
  for (std::size_t i = 0; i < n; ++i) {
    auto set = draw.MutableSet(i);
    std::iota(set.begin(), set.end(), std::size_t{0});
  }
  return draw;
}

double Mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Chi-square statistic of the observed subset counts against uniform.
double ChiSquare(const std::map<std::vector<std::size_t>, int>& counts, int cells, int total) {
  const double expected = static_cast<double>(total) / cells;
  double chi = 0.0;
  for (const auto& [subset, c] : counts) chi += (c - expected) * (c - expected) / expected;
  chi += (cells - static_cast<int>(counts.size())) * expected;
  return chi;
}

}  // namespace

TEST_CASE("n = m = 2 draws the only subset") {
  const ModelParams p{2, 2, 0.5, 0.1};
  const CliqueDraw d = SampleCliques(p, 5, RngSpec{1});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(d.Set(i)[0] == 0);
    CHECK(d.Set(i)[1] == 1);
  }
}

TEST_CASE("pair subsets of four nodes are uniform") {
  const ModelParams p{4, 2, 0.5, 0.1};
  const RngSpec rng{2024};
  std::map<std::vector<std::size_t>, int> counts;
  int total = 0;
  CliqueSampler sampler(p);
  CliqueDraw draw(4, 2, 0);
  for (std::uint64_t t = 0; t < 25000; ++t) {
    sampler.SampleInto(rng, 0, t, draw);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto s = draw.Set(i);
      REQUIRE(s[0] < s[1]);
      ++counts[{s.begin(), s.end()}];
      ++total;
    }
  }
  CHECK(counts.size() == 6);
  // 99.9% quantile of chi-square with 5 degrees of freedom.
  CHECK(ChiSquare(counts, 6, total) < 20.515);
}

TEST_CASE("excluding-self draws never contain the node and are uniform") {
  ModelParams p{5, 2, 0.5, 0.1};
  p.clique_policy = CliquePolicy::kUniformExcludingSelf;
  const RngSpec rng{7};
  CliqueSampler sampler(p);
  CliqueDraw draw(5, 2, 0);
  std::map<std::vector<std::size_t>, int> counts;
  int total = 0;
  for (std::uint64_t t = 0; t < 30000; ++t) {
    sampler.SampleInto(rng, 0, t, draw);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto s = draw.Set(i);
      REQUIRE(std::find(s.begin(), s.end(), i) == s.end());
      if (i == 2) {
        ++counts[{s.begin(), s.end()}];
        ++total;
      }
    }
  }
  CHECK(counts.size() == 6);
  CHECK(ChiSquare(counts, 6, total) < 20.515);
}

TEST_CASE("clique draws are deterministic per (seed, trial, time)") {
  const ModelParams p{10, 4, 0.5, 0.1};
  CHECK(SampleCliques(p, 3, RngSpec{9}, 1) == SampleCliques(p, 3, RngSpec{9}, 1));
  CHECK_FALSE(SampleCliques(p, 3, RngSpec{9}, 1) == SampleCliques(p, 4, RngSpec{9}, 1));
}

TEST_CASE("clique average") {
  const std::vector<double> x{0.3, 0.4, 0.5};
  const std::array<std::size_t, 3> all{0, 1, 2};
  CHECK(CliqueAverage(x, all) == doctest::Approx(0.4).epsilon(1e-15));
  const std::vector<double> ends{0.0, 1.0};
  const std::array<std::size_t, 2> both{0, 1};
  CHECK(CliqueAverage(ends, both) == 0.5);
  const std::vector<double> c(6, 0.37);
  const std::array<std::size_t, 3> some{1, 3, 5};
  CHECK(CliqueAverage(c, some) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK_THROWS_AS(CliqueAverage(x, std::span<const std::size_t>{}), Error);
}

TEST_CASE("step moves nodes inside the band toward their clique average") {
  const ModelParams p{3, 3, 0.5, 0.2};
  const OpinionVector next = Step(OpinionVector{{0.3, 0.4, 0.5}, 0}, FullCliques(3), p);
  CHECK(next[0] == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(next[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(next[2] == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(next.time == 1);
}

TEST_CASE("step leaves nodes outside the band bit-identical") {
  const ModelParams p{3, 3, 0.5, 0.2};
  const OpinionVector x{{0.0, 0.1, 0.9}, 0};
  const OpinionVector next = Step(x, FullCliques(3), p);
  CHECK(next.values == x.values);
}

TEST_CASE("step rejects mismatched inputs") {
  const ModelParams p{3, 3, 0.5, 0.2};
  CHECK_THROWS_AS(Step(OpinionVector{{0.1, 0.2}, 0}, FullCliques(3), p), Error);
  CHECK_THROWS_AS(Step(OpinionVector{{0.1, 0.2, 0.3}, 1}, FullCliques(3, 0), p), Error);
  CliqueDraw bad = FullCliques(3);
  bad.MutableSet(0)[2] = 7;
  CHECK_THROWS_AS(Step(OpinionVector{{0.1, 0.2, 0.3}, 0}, bad, p), Error);
}

TEST_CASE("global mean step on the four-node example") {
  const ModelParams p{4, 4, 0.5, 0.1};
  const OpinionVector x{{0.0, 0.5, 0.9, 1.0}, 0};
  const OpinionVector next = GlobalMeanStep(x, p);
  CHECK(next[0] == 0.0);
  CHECK(next[1] == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(next[2] == 0.9);
  CHECK(next[3] == 1.0);

  ModelParams q = p;
  q.m = 3;
  CHECK_THROWS_AS(GlobalMeanStep(x, q), Error);
}

TEST_CASE("global mean step is bit-identical to a full-clique step") {
  const ModelParams p{7, 7, 0.3, 0.25};
  RandomStream s(5);
  for (int rep = 0; rep < 200; ++rep) {
    OpinionVector x{std::vector<double>(7), 0};
    for (double& v : x.values) v = s.Uniform01();
    CHECK(GlobalMeanStep(x, p) == Step(x, FullCliques(7), p));
  }
}

TEST_CASE("m = n: the mean moves by delta/n times the in-band deviations") {
  const ModelParams p{6, 6, 0.4, 0.2};
  RandomStream s(11);
  for (int rep = 0; rep < 200; ++rep) {
    OpinionVector x{std::vector<double>(6), 0};
    for (double& v : x.values) v = s.Uniform01();
    const double mean = Mean(x.values);
    double drift = 0.0;
    for (double v : x.values) {
      if (std::abs(v - mean) <= p.eta) drift += mean - v;
    }
    const OpinionVector next = GlobalMeanStep(x, p);
    CHECK(Mean(next.values) == doctest::Approx(mean + p.delta / 6.0 * drift).epsilon(1e-12));
  }
}

TEST_CASE("states stay in the shrinking convex hull") {
  const ModelParams p{12, 4, 0.5, 0.3};
  RandomStream s(3);
  OpinionVector x0{std::vector<double>(12), 0};
  for (double& v : x0.values) v = s.Uniform01();
  const TrajectoryRecord traj = Simulate(p, x0, 500, RngSpec{3});
  double lo = *std::min_element(x0.values.begin(), x0.values.end());
  double hi = *std::max_element(x0.values.begin(), x0.values.end());
  for (std::uint64_t t = 1; t <= 500; ++t) {
    const auto x = traj.State(t);
    const double new_lo = *std::min_element(x.begin(), x.end());
    const double new_hi = *std::max_element(x.begin(), x.end());
    REQUIRE(new_lo >= lo);
    REQUIRE(new_hi <= hi);
    lo = new_lo;
    hi = new_hi;
  }
}

TEST_CASE("a state with every node outside the band is a fixed point") {
  const ModelParams p{4, 4, 0.5, 0.1};
  const OpinionVector x0{{0.0, 0.05, 0.95, 1.0}, 0};
  const TrajectoryRecord traj = Simulate(p, x0, 1000, RngSpec{1});
  CHECK(traj.final_state().values == x0.values);
}

TEST_CASE("all nodes within the band converge to the initial mean") {
  const ModelParams p{5, 5, 0.5, 0.5};
  const OpinionVector x0{{0.3, 0.4, 0.5, 0.6, 0.7}, 0};
  const TrajectoryRecord traj = Simulate(p, x0, 200, RngSpec{1});
  for (double v : traj.final_state().values) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("simulate is a pure function of its inputs") {
  const ModelParams p{20, 4, 0.5, 0.2};
  RandomStream s(8);
  OpinionVector x0{std::vector<double>(20), 0};
  for (double& v : x0.values) v = s.Uniform01();
  const TrajectoryRecord a = Simulate(p, x0, 300, RngSpec{77});
  const TrajectoryRecord b = Simulate(p, x0, 300, RngSpec{77});
  for (std::uint64_t t = 0; t <= 300; ++t) {
    const auto xa = a.State(t);
    const auto xb = b.State(t);
    REQUIRE(std::equal(xa.begin(), xa.end(), xb.begin()));
  }
  const TrajectoryRecord c = Simulate(p, x0, 300, RngSpec{78});
  CHECK_FALSE(c.final_state() == a.final_state());
}

TEST_CASE("zero horizon keeps only the initial state") {
  const ModelParams p{3, 2, 0.5, 0.2};
  const OpinionVector x0{{0.1, 0.2, 0.3}, 0};
  const TrajectoryRecord traj = Simulate(p, x0, 0, RngSpec{1});
  CHECK(traj.current_time() == 0);
  CHECK(traj.final_state() == x0);
}

TEST_CASE("streaming and full records end in the same state") {
  const ModelParams p{10, 3, 0.5, 0.3};
  RandomStream s(4);
  OpinionVector x0{std::vector<double>(10), 0};
  for (double& v : x0.values) v = s.Uniform01();
  SimulationOptions streaming;
  streaming.recording = RecordingMode::kStreaming;
  streaming.retained_steps = 10;
  const TrajectoryRecord full = Simulate(p, x0, 400, RngSpec{5});
  const TrajectoryRecord tail = Simulate(p, x0, 400, RngSpec{5}, streaming);
  CHECK(full.final_state() == tail.final_state());
  for (std::uint64_t t = 390; t <= 400; ++t) {
    const auto a = full.State(t);
    const auto b = tail.State(t);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK_THROWS_AS(tail.State(389), Error);
  CHECK(DefaultRecordingMode(100000) == RecordingMode::kFull);
  CHECK(DefaultRecordingMode(100001) == RecordingMode::kStreaming);
}
