#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cliquedyn/error.h"
#include "cliquedyn/trajectory.h"

using namespace cliquedyn;

TEST_CASE("full record keeps every state and per-node change times") {
  TrajectoryRecord rec(RecordingMode::kFull, 3, 0, OpinionVector{{0.1, 0.5}, 0});
  rec.Push(std::vector<double>{0.2, 0.5});
  rec.Push(std::vector<double>{0.2, 0.5});
  rec.Push(std::vector<double>{0.05, 0.5});
  CHECK(rec.current_time() == 3);
  CHECK(rec.first_available_time() == 0);
  CHECK(rec.State(1)[0] == 0.2);
  const auto s = rec.node_summaries();
  CHECK(s[0].first_change == 1);
  CHECK(s[0].last_change == 3);
  CHECK(s[0].min == 0.05);
  CHECK(s[0].max == 0.2);
  CHECK_FALSE(s[1].first_change.has_value());
  CHECK(s[1].min == 0.5);
}

TEST_CASE("streaming record drops old states") {
  TrajectoryRecord rec(RecordingMode::kStreaming, 10, 2, OpinionVector{{0.0}, 0});
  for (int t = 1; t <= 10; ++t) rec.Push(std::vector<double>{0.1 * t});
  CHECK(rec.first_available_time() == 8);
  CHECK(rec.HasState(8));
  CHECK_FALSE(rec.HasState(7));
  CHECK(rec.State(10)[0] == doctest::Approx(1.0));
  try {
    rec.State(3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnsupportedRecordingMode);
  }
  CHECK(rec.node_summaries()[0].min == 0.0);
}

TEST_CASE("signed zero counts as a change") {
  TrajectoryRecord rec(RecordingMode::kFull, 1, 0, OpinionVector{{0.0}, 0});
  rec.Push(std::vector<double>{-0.0});
  CHECK(rec.node_summaries()[0].first_change == 1);
}

TEST_CASE("non-finite values are rejected") {
  TrajectoryRecord rec(RecordingMode::kFull, 2, 0, OpinionVector{{0.3}, 0});
  try {
    rec.Push(std::vector<double>{std::numeric_limits<double>::quiet_NaN()});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumericalFailure);
  }
  CHECK_THROWS_AS(
      TrajectoryRecord(RecordingMode::kFull, 1, 0, OpinionVector{{INFINITY}, 0}), Error);
}

TEST_CASE("records may start at a later time") {
  TrajectoryRecord rec(RecordingMode::kFull, 2, 0, OpinionVector{{0.3}, 5});
  rec.Push(std::vector<double>{0.4});
  CHECK(rec.current_time() == 6);
  CHECK(rec.first_available_time() == 5);
  CHECK(rec.final_state().time == 6);
}
