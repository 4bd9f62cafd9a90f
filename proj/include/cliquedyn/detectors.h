#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cliquedyn/model.h"
#include "cliquedyn/trajectory.h"

namespace cliquedyn {

enum class Verdict {
  kConsensus,
  kDisagreement,
  kPartialAgreement,
  kFluctuating,
  kUndetermined,
};

inline constexpr std::size_t kVerdictCount = 5;

std::string_view VerdictName(Verdict verdict);
std::optional<Verdict> ParseVerdict(std::string_view name);

struct DetectorThresholds {
  double tol = 1e-9;              // tail variation below which a node counts as converged
  std::uint64_t window = 1000;    // tail length in steps
  double consensus_tol = 1e-8;    // limit comparison
  double fluct_threshold = 0.05;  // tail amplitude that counts as fluctuation

  // tol 1e-9 for the deterministic m = n dynamics, 1e-6 otherwise;
  // window max(1000, T/10) capped at T/2; consensus_tol 10 tol; threshold eta/2.
  static DetectorThresholds Defaults(const ModelParams& params, std::uint64_t horizon);
};

// Steps simulated since the initial state.
std::uint64_t ElapsedSteps(const TrajectoryRecord& traj) noexcept;

struct TailStats {
  std::uint64_t window = 0;
  std::vector<double> min;
  std::vector<double> max;

  double amplitude(std::size_t node) const { return max[node] - min[node]; }
};

// Per-node min and max over the final `window` states x(T-window+1..T).
// Throws kInsufficientData when window is 0 or exceeds T, and
// kUnsupportedRecordingMode when the record no longer holds those states.
TailStats ComputeTailStats(const TrajectoryRecord& traj, std::uint64_t window);

struct ConvergenceReport {
  std::uint64_t window = 0;
  std::vector<bool> converged;
  std::vector<double> limits;  // final values
  std::vector<double> amplitudes;

  bool all_converged() const noexcept;
};

// Requires T >= 2 window (kInsufficientData otherwise).
ConvergenceReport DetectConvergence(const TrajectoryRecord& traj, double tol,
                                    std::uint64_t window);

struct ClassificationResult {
  Verdict verdict = Verdict::kUndetermined;
  std::vector<double> limits;  // final values; meaningful when converged
  std::vector<double> amplitudes;
  std::vector<double> tail_min;
  std::vector<double> tail_max;
  std::vector<std::optional<std::uint64_t>> last_change;
  std::vector<bool> frozen;  // bit-identical over the whole horizon
  std::uint64_t window = 0;

  bool operator==(const ClassificationResult&) const = default;
};

ClassificationResult Classify(const TrajectoryRecord& traj, const DetectorThresholds& thresholds);

struct OrderPreservation {
  bool preserved = true;
  std::optional<std::uint64_t> first_violation;
};

// The order of x(0) (ties by node index) must keep x(t) non-decreasing for
// every t. Full records only.
OrderPreservation OrderPreservationCheck(const TrajectoryRecord& traj);

// True iff every listed node never changed bitwise.
bool FrozenNodesCheck(const TrajectoryRecord& traj, std::span<const std::size_t> nodes);

struct OscillationBounds {
  double tail_max = 0.0;
  double tail_min = 0.0;
  std::uint64_t tail_steps = 0;

  double amplitude() const noexcept { return tail_max - tail_min; }
};

// Extremes of x_node over the last ceil(tail_fraction * T) steps.
OscillationBounds ComputeOscillationBounds(const TrajectoryRecord& traj, std::size_t node,
                                           double tail_fraction);

}  // namespace cliquedyn
