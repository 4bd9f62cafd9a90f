#include "cliquedyn/detectors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "cliquedyn/error.h"

namespace cliquedyn {

namespace {

constexpr std::array<std::string_view, kVerdictCount> kVerdictNames = {
    "consensus", "disagreement", "partial-agreement", "fluctuating", "undetermined"};

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  return kVerdictNames[static_cast<std::size_t>(verdict)];
}

std::optional<Verdict> ParseVerdict(std::string_view name) {
  for (std::size_t i = 0; i < kVerdictCount; ++i) {
    if (kVerdictNames[i] == name) return static_cast<Verdict>(i);
  }
  return std::nullopt;
}

DetectorThresholds DetectorThresholds::Defaults(const ModelParams& params,
                                                std::uint64_t horizon) {
  DetectorThresholds t;
  const bool deterministic =
      params.m == params.n && params.clique_policy == CliquePolicy::kUniformAllSubsets;
  t.tol = deterministic ? 1e-9 : 1e-6;
  t.consensus_tol = 10.0 * t.tol;
  t.window = std::max<std::uint64_t>(1000, horizon / 10);
  t.window = std::max<std::uint64_t>(1, std::min(t.window, horizon / 2));
  t.fluct_threshold = params.eta / 2.0;
  return t;
}

std::uint64_t ElapsedSteps(const TrajectoryRecord& traj) noexcept {
  return traj.current_time() - traj.initial().time;
}

TailStats ComputeTailStats(const TrajectoryRecord& traj, std::uint64_t window) {
  const std::uint64_t steps = ElapsedSteps(traj);
  Require(window >= 1 && window <= steps, ErrorKind::kInsufficientData,
          "tail window " + std::to_string(window) + " does not fit a horizon of " +
              std::to_string(steps));
  const std::uint64_t end = traj.current_time();
  const std::uint64_t begin = end - window + 1;
  Require(traj.HasState(begin), ErrorKind::kUnsupportedRecordingMode,
          "record keeps only " + std::to_string(traj.retained_steps()) +
              " trailing steps, tail needs " + std::to_string(window));
  TailStats tail;
  tail.window = window;
  const auto first = traj.State(end);
  tail.min.assign(first.begin(), first.end());
  tail.max.assign(first.begin(), first.end());
  for (std::uint64_t t = begin; t < end; ++t) {
    const auto x = traj.State(t);
    for (std::size_t i = 0; i < x.size(); ++i) {
      tail.min[i] = std::min(tail.min[i], x[i]);
      tail.max[i] = std::max(tail.max[i], x[i]);
    }
  }
  return tail;
}

bool ConvergenceReport::all_converged() const noexcept {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

ConvergenceReport DetectConvergence(const TrajectoryRecord& traj, double tol,
                                    std::uint64_t window) {
  Require(window >= 1 && ElapsedSteps(traj) >= 2 * window, ErrorKind::kInsufficientData,
          "horizon " + std::to_string(ElapsedSteps(traj)) + " is shorter than twice the window " +
              std::to_string(window));
  const TailStats tail = ComputeTailStats(traj, window);
  ConvergenceReport report;
  report.window = window;
  report.limits = traj.final_state().values;
  const std::size_t n = traj.node_count();
  report.amplitudes.resize(n);
  report.converged.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.amplitudes[i] = tail.amplitude(i);
    report.converged[i] = report.amplitudes[i] < tol;
  }
  return report;
}

ClassificationResult Classify(const TrajectoryRecord& traj,
                              const DetectorThresholds& thresholds) {
  const ConvergenceReport conv = DetectConvergence(traj, thresholds.tol, thresholds.window);
  const TailStats tail = ComputeTailStats(traj, thresholds.window);
  const std::size_t n = traj.node_count();

  ClassificationResult r;
  r.window = thresholds.window;
  r.limits = conv.limits;
  r.amplitudes = conv.amplitudes;
  r.tail_min = tail.min;
  r.tail_max = tail.max;
  const auto summaries = traj.node_summaries();
  r.last_change.resize(n);
  r.frozen.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.last_change[i] = summaries[i].last_change;
    r.frozen[i] = !summaries[i].first_change.has_value();
  }

  const bool fluctuating =
      std::any_of(r.amplitudes.begin(), r.amplitudes.end(),
                  [&](double a) { return a >= thresholds.fluct_threshold; });
  if (fluctuating) {
    r.verdict = Verdict::kFluctuating;
  } else if (!conv.all_converged()) {
    r.verdict = Verdict::kUndetermined;
  } else {
    std::vector<double> sorted = r.limits;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() - sorted.front() < thresholds.consensus_tol) {
      r.verdict = Verdict::kConsensus;
    } else {
      bool separated = true;
      for (std::size_t i = 1; i < n; ++i) {
        if (!(sorted[i] - sorted[i - 1] > thresholds.consensus_tol)) separated = false;
      }
      r.verdict = separated ? Verdict::kDisagreement : Verdict::kPartialAgreement;
    }
  }
  return r;
}

OrderPreservation OrderPreservationCheck(const TrajectoryRecord& traj) {
  Require(traj.mode() == RecordingMode::kFull, ErrorKind::kUnsupportedRecordingMode,
          "order preservation needs a full record");
  const auto& x0 = traj.initial().values;
  std::vector<std::size_t> order(x0.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x0[a] < x0[b]; });
  OrderPreservation result;
  for (std::uint64_t t = traj.initial().time + 1; t <= traj.current_time(); ++t) {
    const auto x = traj.State(t);
    for (std::size_t r = 1; r < order.size(); ++r) {
      if (x[order[r - 1]] > x[order[r]]) {
        result.preserved = false;
        result.first_violation = t;
        return result;
      }
    }
  }
  return result;
}

bool FrozenNodesCheck(const TrajectoryRecord& traj, std::span<const std::size_t> nodes) {
  const auto summaries = traj.node_summaries();
  for (std::size_t i : nodes) {
    Require(i < summaries.size(), ErrorKind::kInvalidArgument,
            "node " + std::to_string(i) + " out of range");
    if (summaries[i].first_change.has_value()) return false;
  }
  return true;
}

OscillationBounds ComputeOscillationBounds(const TrajectoryRecord& traj, std::size_t node,
                                           double tail_fraction) {
  Require(node < traj.node_count(), ErrorKind::kInvalidArgument,
          "node " + std::to_string(node) + " out of range");
  Require(tail_fraction > 0.0 && tail_fraction <= 1.0, ErrorKind::kInvalidArgument,
          "tail fraction must lie in (0, 1]");
  const std::uint64_t steps = ElapsedSteps(traj);
  Require(steps >= 1, ErrorKind::kInsufficientData, "empty trajectory");
  auto tail_steps =
      static_cast<std::uint64_t>(std::ceil(tail_fraction * static_cast<double>(steps)));
  tail_steps = std::clamp<std::uint64_t>(tail_steps, 1, steps);
  const TailStats tail = ComputeTailStats(traj, tail_steps);
  return OscillationBounds{tail.max[node], tail.min[node], tail_steps};
}

}  // namespace cliquedyn
