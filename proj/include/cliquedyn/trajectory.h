#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cliquedyn/model.h"

namespace cliquedyn {

enum class RecordingMode { kFull, kStreaming };

std::string_view RecordingModeName(RecordingMode mode);

// Whole-horizon statistics of one node, kept in both recording modes.
struct NodeSummary {
  double min = 0.0;
  double max = 0.0;
  // Times t at which x_i(t) differs bitwise from x_i(t-1).
  std::optional<std::uint64_t> first_change;
  std::optional<std::uint64_t> last_change;
};

// History of one simulated trajectory.
//
// States are kept in a ring of `retained_steps() + 1` slots. A full record
// retains the whole horizon; a streaming record keeps only the trailing
// window, which is what the tail-based detectors consume.
class TrajectoryRecord {
 public:
  TrajectoryRecord(RecordingMode mode, std::uint64_t horizon,
                   std::uint64_t retained_steps, const OpinionVector& x0);

  // Appends x(t) for t = current_time() + 1. Throws kNumericalFailure on a
  // non-finite entry.
  void Push(std::span<const double> state);

  RecordingMode mode() const noexcept { return mode_; }
  std::size_t node_count() const noexcept { return n_; }
  std::uint64_t horizon() const noexcept { return horizon_; }
  std::uint64_t retained_steps() const noexcept { return retained_; }
  std::uint64_t current_time() const noexcept { return time_; }

  const OpinionVector& initial() const noexcept { return initial_; }
  OpinionVector final_state() const;

  std::span<const NodeSummary> node_summaries() const noexcept { return summaries_; }

  // Earliest time whose state is still available.
  std::uint64_t first_available_time() const noexcept;
  bool HasState(std::uint64_t t) const noexcept;
  // Throws kUnsupportedRecordingMode when t fell out of the retained window.
  std::span<const double> State(std::uint64_t t) const;

 private:
  RecordingMode mode_;
  std::size_t n_;
  std::uint64_t horizon_;
  std::uint64_t retained_;
  std::uint64_t time_ = 0;
  OpinionVector initial_;
  std::vector<NodeSummary> summaries_;
  std::vector<double> ring_;
};

}  // namespace cliquedyn
