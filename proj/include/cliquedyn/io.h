#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliquedyn/detectors.h"
#include "cliquedyn/montecarlo.h"
#include "cliquedyn/order_analytics.h"
#include "cliquedyn/trajectory.h"

namespace cliquedyn {

// 17 significant digits; round-trips every binary64 value.
std::string FormatDouble(double value);

// Strict parsers; throw kInvalidConfiguration naming `what`.
double ParseDouble(std::string_view text, std::string_view what);
std::uint64_t ParseUnsigned(std::string_view text, std::string_view what);
std::vector<double> ParseDoubleList(std::string_view text, std::string_view what);
std::vector<std::size_t> ParseIndexList(std::string_view text, std::string_view what);

// Flat `key = value` text, one entry per line, `#` starts a comment.
//
//   n, m                 node count and clique size (2 <= n, 1 <= m <= n)
//   delta                mixing weight, open interval (0, 1)
//   eta                  confidence level, > 0
//   clique_policy        uniform-all-subsets | uniform-excluding-self
//   boundary_epsilon     slack added to eta in the confidence test, >= 0
//   initial              uniform | A_k | B_kl | C1 | C2 | Istar1..3 | E_K0 |
//                        Theorem4Gamma | explicit
//   initial_k, initial_l, initial_K, initial_beta, initial_pivot,
//   initial_values (comma separated), initial_max_tries
//   horizon              steps T >= 1
//   trials               R >= 1
//   seed                 master seed, unsigned 64-bit
//   tol, window, consensus_tol, fluct_threshold   detector overrides
//   parallelism          worker threads, 0 = environment default
void ApplyConfigValue(ExperimentConfig& config, std::string_view key, std::string_view value);
ExperimentConfig ParseConfig(std::string_view text);
std::string SerializeConfig(const ExperimentConfig& config);
ExperimentConfig LoadConfigFile(const std::string& path);

// Header `t,x_1,...,x_n`, then one row per retained state.
void WriteTrajectoryCsv(std::ostream& out, const TrajectoryRecord& traj);

// Header `<variable>,trials,fluct_rate,ci_lo,ci_hi,undetermined`.
void WriteSweepCsv(std::ostream& out, std::string_view variable, std::span<const SweepRow> rows);

// Header `event,successes,failures,undetermined,trials,point,ci_lo,ci_hi`.
void WriteEstimateCsv(std::ostream& out, std::span<const ProbabilityEstimate> estimates);

// One JSON object per line.
std::string ClassificationJson(const TrialResult& result);

struct RunManifest {
  std::string command;
  std::string config_echo;  // SerializeConfig output
  std::string tool_version;
  std::uint64_t master_seed = 0;
  std::string start_time;  // UTC, ISO 8601
  std::string end_time;
  std::vector<std::string> outputs;

  std::string ToJsonLine() const;
};

std::string UtcTimestamp();

inline constexpr std::string_view kToolVersion = "1.0.0";

}  // namespace cliquedyn
