#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliquedyn/detectors.h"
#include "cliquedyn/initial_conditions.h"
#include "cliquedyn/model.h"

namespace cliquedyn {

// Unset fields fall back to DetectorThresholds::Defaults.
struct ThresholdOverrides {
  std::optional<double> tol;
  std::optional<std::uint64_t> window;
  std::optional<double> consensus_tol;
  std::optional<double> fluct_threshold;

  bool operator==(const ThresholdOverrides&) const = default;
};

struct ExperimentConfig {
  ModelParams params;
  InitialSpec initial;
  std::uint64_t horizon = 1000;
  std::uint64_t trials = 1;
  ThresholdOverrides thresholds;
  std::uint64_t master_seed = 0;
  std::size_t parallelism = 0;  // 0: CLIQUEDYN_THREADS, else hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;

  // Throws kInvalidConfiguration.
  void Validate() const;
  DetectorThresholds ResolvedThresholds() const;
};

inline constexpr std::string_view kThreadsEnvVar = "CLIQUEDYN_THREADS";

// Worker count when the config leaves it open.
std::size_t DefaultParallelism();

struct TrialResult {
  std::uint64_t trial = 0;
  OpinionVector initial;
  ClassificationResult classification;

  bool operator==(const TrialResult&) const = default;
};

// Trial r draws its initial state from Stream(kInitialState, r) and its
// cliques from Stream(kCliques, r, t, i), so results do not depend on
// scheduling. Results are returned in trial order. A failing trial rethrows
// its error with the trial index prepended.
std::vector<TrialResult> RunTrials(const ExperimentConfig& config);

// Single trial, as RunTrials would run it.
TrialResult RunTrial(const ExperimentConfig& config, std::uint64_t trial);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

WilsonInterval Wilson(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

struct ProbabilityEstimate {
  std::string event;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  std::uint64_t undetermined = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

using EventPredicate = std::function<bool(const ClassificationResult&)>;

EventPredicate VerdictIs(Verdict verdict);

// Undetermined trials are excluded from the proportion. Throws
// kDegenerateEstimate when there are no determined trials.
ProbabilityEstimate EstimateProbability(std::span<const TrialResult> results,
                                        std::string_view event, const EventPredicate& predicate);

std::array<std::uint64_t, kVerdictCount> CountVerdicts(std::span<const TrialResult> results);

struct DensityReport {
  std::size_t samples = 0;
  std::size_t bins = 0;  // per dimension
  double mean_abs_error = 0.0;
  double peak = 0.0;
  double relative_error = 0.0;  // mean_abs_error / peak
  double normalization = 0.0;   // integral of the density over the grid
};

// Histograms the order statistics at `ranks` (1-based) of n uniforms against
// the exact density averaged over each bin (midpoint rule on a
// `subdivisions`-point grid per axis). At most 3 ranks.
DensityReport ValidateOrderStatDensity(std::size_t n, std::span<const std::size_t> ranks,
                                       std::size_t samples, std::size_t bins,
                                       std::uint64_t seed, std::size_t subdivisions = 4);

enum class SweepVariable { kEta, kDelta };

std::string_view SweepVariableName(SweepVariable variable);
std::optional<SweepVariable> ParseSweepVariable(std::string_view name);

struct SweepRow {
  double value = 0.0;
  ProbabilityEstimate fluctuation;
  std::array<std::uint64_t, kVerdictCount> verdicts{};
};

// One row per grid value, in grid order; thresholds are re-resolved per
// point so that the eta-dependent defaults follow the grid.
std::vector<SweepRow> PhaseSweep(const ExperimentConfig& base, SweepVariable variable,
                                 std::span<const double> grid);

}  // namespace cliquedyn
