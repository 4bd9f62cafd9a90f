#include "cliquedyn/trajectory.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cliquedyn/error.h"

namespace cliquedyn {

std::string_view RecordingModeName(RecordingMode mode) {
  return mode == RecordingMode::kFull ? "full" : "streaming";
}

TrajectoryRecord::TrajectoryRecord(RecordingMode mode, std::uint64_t horizon,
                                   std::uint64_t retained_steps,
                                   const OpinionVector& x0)
    : mode_(mode),
      n_(x0.size()),
      horizon_(horizon),
      retained_(mode == RecordingMode::kFull ? horizon
                                             : std::min(retained_steps, horizon)),
      time_(x0.time),
      initial_(x0) {
  for (double v : x0.values) {
    Require(std::isfinite(v), ErrorKind::kNumericalFailure, "non-finite initial opinion");
  }
  summaries_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    summaries_[i].min = summaries_[i].max = x0.values[i];
  }
  ring_.resize((retained_ + 1) * n_);
  std::copy(x0.values.begin(), x0.values.end(),
            ring_.begin() + static_cast<std::ptrdiff_t>((time_ % (retained_ + 1)) * n_));
}

void TrajectoryRecord::Push(std::span<const double> state) {
  Require(state.size() == n_, ErrorKind::kInvalidArgument, "state dimension mismatch");
  const std::span<const double> previous = State(time_);
  const std::uint64_t t = time_ + 1;
  for (std::size_t i = 0; i < n_; ++i) {
    const double v = state[i];
    if (!std::isfinite(v)) {
      Fail(ErrorKind::kNumericalFailure,
           "non-finite opinion at node " + std::to_string(i) + ", t=" + std::to_string(t));
    }
    NodeSummary& s = summaries_[i];
    if (std::bit_cast<std::uint64_t>(v) != std::bit_cast<std::uint64_t>(previous[i])) {
      if (!s.first_change) s.first_change = t;
      s.last_change = t;
    }
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  // `previous` may alias the destination slot only when retained_ == 0.
  std::copy(state.begin(), state.end(),
            ring_.begin() + static_cast<std::ptrdiff_t>((t % (retained_ + 1)) * n_));
  time_ = t;
}

OpinionVector TrajectoryRecord::final_state() const {
  const auto s = State(time_);
  return OpinionVector{std::vector<double>(s.begin(), s.end()), time_};
}

std::uint64_t TrajectoryRecord::first_available_time() const noexcept {
  const std::uint64_t start = initial_.time;
  return time_ - start > retained_ ? time_ - retained_ : start;
}

bool TrajectoryRecord::HasState(std::uint64_t t) const noexcept {
  return t <= time_ && t >= first_available_time();
}

std::span<const double> TrajectoryRecord::State(std::uint64_t t) const {
  if (!HasState(t)) {
    Fail(ErrorKind::kUnsupportedRecordingMode,
         "state at t=" + std::to_string(t) + " is not retained by this " +
             std::string(RecordingModeName(mode_)) + " record");
  }
  return {ring_.data() + (t % (retained_ + 1)) * n_, n_};
}

}  // namespace cliquedyn
