#include <doctest.h>

#include <array>
#include <numeric>
#include <vector>

#include "cliquedyn/detectors.h"
#include "cliquedyn/dynamics.h"
#include "cliquedyn/error.h"
#include "cliquedyn/initial_conditions.h"

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

TrajectoryRecord Run(const ModelParams& p, std::vector<double> x0, std::uint64_t horizon,
                     std::uint64_t seed = 1, RecordingMode mode = RecordingMode::kFull) {
  SimulationOptions o;
  o.recording = mode;
  o.retained_steps = horizon / 2;
  return Simulate(p, OpinionVector{std::move(x0), 0}, horizon, RngSpec{seed}, o);
}

}  // namespace

TEST_CASE("verdict names round-trip") {
  for (std::size_t i = 0; i < kVerdictCount; ++i) {
    const auto v = static_cast<Verdict>(i);
    CHECK(ParseVerdict(VerdictName(v)) == v);
  }
}

TEST_CASE("default thresholds") {
  const DetectorThresholds det = DetectorThresholds::Defaults(ModelParams{5, 5, 0.5, 0.2}, 50000);
  CHECK(det.tol == 1e-9);
  CHECK(det.consensus_tol == doctest::Approx(1e-8));
  CHECK(det.window == 5000);
  CHECK(det.fluct_threshold == doctest::Approx(0.1));
  const DetectorThresholds sto = DetectorThresholds::Defaults(ModelParams{20, 4, 0.5, 0.2}, 5000);
  CHECK(sto.tol == 1e-6);
  CHECK(sto.window == 1000);
  const DetectorThresholds short_run = DetectorThresholds::Defaults(ModelParams{5, 5, 0.5, 0.2}, 600);
  CHECK(short_run.window == 300);
}

TEST_CASE("frozen trajectory converges to its initial values") {
  const ModelParams p{4, 4, 0.5, 0.1};
  const std::vector<double> x0{0.0, 0.05, 0.95, 1.0};
  const TrajectoryRecord traj = Run(p, x0, 400);
  for (std::uint64_t w : {1u, 10u, 200u}) {
    const ConvergenceReport r = DetectConvergence(traj, 1e-9, w);
    CHECK(r.all_converged());
    CHECK(r.limits == x0);
  }
  CHECK(KindOf([&] { DetectConvergence(traj, 1e-9, 201); }) == ErrorKind::kInsufficientData);
  const std::array<std::size_t, 4> all{0, 1, 2, 3};
  CHECK(FrozenNodesCheck(traj, all));
  CHECK(OrderPreservationCheck(traj).preserved);
}

TEST_CASE("single-node limit detected within 1e-8") {
  const ModelParams p{4, 4, 0.5, 0.1};
  const TrajectoryRecord traj = Run(p, {0.0, 0.5, 0.9, 1.0}, 2000);
  const ConvergenceReport r = DetectConvergence(traj, 1e-9, 1000);
  CHECK(r.all_converged());
  CHECK(std::abs(r.limits[1] - (0.6 + 0.1 / 3)) < 1e-8);
  CHECK(r.limits[0] == 0.0);
  CHECK(r.limits[2] == 0.9);
  CHECK(r.limits[3] == 1.0);
  const OrderPreservation o = OrderPreservationCheck(Run(p, {0.0, 0.5, 0.9, 1.0}, 10000));
  CHECK(o.preserved);
  const std::array<std::size_t, 3> others{0, 2, 3};
  CHECK(FrozenNodesCheck(traj, others));
  const std::array<std::size_t, 1> mover{1};
  CHECK_FALSE(FrozenNodesCheck(traj, mover));
}

TEST_CASE("classification verdicts") {
  SUBCASE("all equal is consensus") {
    const ModelParams p{5, 5, 0.5, 0.1};
    const TrajectoryRecord traj = Run(p, std::vector<double>(5, 0.4), 100);
    const ClassificationResult c = Classify(traj, DetectorThresholds::Defaults(p, 100));
    CHECK(c.verdict == Verdict::kConsensus);
    for (double a : c.amplitudes) CHECK(a == 0.0);
  }
  SUBCASE("separated frozen halves are disagreement") {
    const ModelParams p{4, 4, 0.5, 0.15};
    const std::vector<double> x0{0.01, 0.05, 0.93, 0.99};
    const TrajectoryRecord traj = Run(p, x0, 2000);
    const ClassificationResult c = Classify(traj, DetectorThresholds::Defaults(p, 2000));
    CHECK(c.verdict == Verdict::kDisagreement);
    CHECK(c.limits == x0);
    for (bool f : c.frozen) CHECK(f);
  }
  SUBCASE("two clusters of equal limits are partial agreement") {
    const ModelParams p{4, 2, 0.5, 0.1};
    const TrajectoryRecord traj = Run(p, {0.1, 0.1, 0.9, 0.9}, 100);
    const ClassificationResult c = Classify(traj, DetectorThresholds::Defaults(p, 100));
    CHECK(c.verdict == Verdict::kPartialAgreement);
  }
  SUBCASE("slow convergence is undetermined") {
    const ModelParams p{3, 3, 0.001, 0.9};
    const TrajectoryRecord traj = Run(p, {0.1, 0.5, 0.9}, 100);
    DetectorThresholds t = DetectorThresholds::Defaults(p, 100);
    t.fluct_threshold = 0.5;
    CHECK(Classify(traj, t).verdict == Verdict::kUndetermined);
  }
  SUBCASE("small cliques at low eta fluctuate") {
    const ModelParams p{20, 4, 0.5, 0.2};
    RandomStream s(4);
    std::size_t fluctuating = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::vector<double> x0(20);
      for (double& v : x0) v = s.Uniform01();
      const TrajectoryRecord traj = Run(p, x0, 5000, seed);
      fluctuating += Classify(traj, DetectorThresholds::Defaults(p, 5000)).verdict ==
                     Verdict::kFluctuating;
    }
    CHECK(fluctuating >= 5);
  }
}

TEST_CASE("classification is a pure function of the record") {
  const ModelParams p{10, 3, 0.5, 0.25};
  RandomStream s(6);
  std::vector<double> x0(10);
  for (double& v : x0) v = s.Uniform01();
  const TrajectoryRecord traj = Run(p, x0, 3000, 9);
  const DetectorThresholds t = DetectorThresholds::Defaults(p, 3000);
  CHECK(Classify(traj, t) == Classify(traj, t));
}

TEST_CASE("m = n never fluctuates") {
  const ModelParams p{5, 5, 0.5, 0.15};
  RandomStream s(10);
  DetectorThresholds t = DetectorThresholds::Defaults(p, 10000);
  t.tol = 1e-7;
  t.consensus_tol = 1e-6;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> x0(5);
    for (double& v : x0) v = s.Uniform01();
    SimulationOptions o;
    o.recording = RecordingMode::kStreaming;
    o.retained_steps = t.window;
    const TrajectoryRecord traj = Simulate(p, OpinionVector{x0, 0}, 10000, RngSpec{0}, o);
    const Verdict v = Classify(traj, t).verdict;
    REQUIRE(v != Verdict::kFluctuating);
    REQUIRE(v != Verdict::kUndetermined);
  }
}

TEST_CASE("tail amplitude grows with the window") {
  const ModelParams p{12, 3, 0.5, 0.2};
  RandomStream s(2);
  std::vector<double> x0(12);
  for (double& v : x0) v = s.Uniform01();
  const TrajectoryRecord traj = Run(p, x0, 2000, 5);
  double previous = 0.0;
  for (std::uint64_t w : {10u, 50u, 200u, 1000u}) {
    const TailStats tail = ComputeTailStats(traj, w);
    double total = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(tail.amplitude(i) >= 0.0);
      total += tail.amplitude(i);
    }
    CHECK(total >= previous);
    previous = total;
  }
}

TEST_CASE("order violations report their first time") {
  // With a wide band and small cliques a node can jump past another.
  const ModelParams p{3, 2, 0.9, 1.0};
  const TrajectoryRecord traj = Run(p, {0.0, 0.45, 1.0}, 50);
  const OrderPreservation o = OrderPreservationCheck(traj);
  REQUIRE_FALSE(o.preserved);
  REQUIRE(o.first_violation.has_value());
  const std::uint64_t t = *o.first_violation;
  const auto before = traj.State(t - 1);
  CHECK((before[0] <= before[1] && before[1] <= before[2]));
  const auto after = traj.State(t);
  CHECK_FALSE((after[0] <= after[1] && after[1] <= after[2]));
}

TEST_CASE("order check needs a full record") {
  const ModelParams p{3, 3, 0.5, 0.1};
  const TrajectoryRecord traj = Run(p, {0.0, 0.45, 1.0}, 10, 1, RecordingMode::kStreaming);
  CHECK(KindOf([&] { OrderPreservationCheck(traj); }) == ErrorKind::kUnsupportedRecordingMode);
}

TEST_CASE("oscillation bounds") {
  const ModelParams p{4, 4, 0.5, 0.1};
  const TrajectoryRecord frozen = Run(p, {0.0, 0.05, 0.95, 1.0}, 100);
  const OscillationBounds b = ComputeOscillationBounds(frozen, 2, 0.5);
  CHECK(b.tail_max == 0.95);
  CHECK(b.tail_min == 0.95);
  CHECK(b.amplitude() == 0.0);
  CHECK(b.tail_steps == 50);
  CHECK(KindOf([&] { ComputeOscillationBounds(frozen, 4, 0.5); }) == ErrorKind::kInvalidArgument);
  CHECK(KindOf([&] { ComputeOscillationBounds(frozen, 0, 0.0); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("constructed fluctuation event: node K keeps moving, the rest stay put") {
  const ModelParams p{9, 6, 0.5, 0.14};
  RandomStream s(1);
  const OpinionVector x0 = SampleEK0(p, 5, 0.1, s);
  SimulationOptions o;
  o.recording = RecordingMode::kStreaming;
  o.retained_steps = 10000;
  const TrajectoryRecord traj = Simulate(p, x0, 30000, RngSpec{3}, o);
  const ConvergenceReport r = DetectConvergence(traj, 1e-3, 10000);
  CHECK_FALSE(r.converged[4]);
  std::vector<std::size_t> others{0, 1, 2, 3, 5, 6, 7, 8};
  CHECK(FrozenNodesCheck(traj, others));
}
