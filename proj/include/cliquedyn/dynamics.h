#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cliquedyn/model.h"
#include "cliquedyn/rng.h"
#include "cliquedyn/trajectory.h"

namespace cliquedyn {

// Draws neighbor sets with Floyd's m-of-n algorithm: O(m) work and m random
// draws per node, without materializing the C(n, m) candidate subsets.
class CliqueSampler {
 public:
  explicit CliqueSampler(const ModelParams& params);

  // Fills `out` (size m) with a sorted uniformly random subset for `node`.
  void SampleSet(std::size_t node, RandomStream& stream, std::span<std::size_t> out);

  // Every node's set at `time`; node i uses Stream(kCliques, trial, time, i).
  void SampleInto(const RngSpec& rng, std::uint64_t trial, std::uint64_t time,
                  CliqueDraw& out);

 private:
  std::size_t n_;
  std::size_t m_;
  CliquePolicy policy_;
  std::vector<char> marks_;
};

CliqueDraw SampleCliques(const ModelParams& params, std::uint64_t time,
                         const RngSpec& rng, std::uint64_t trial = 0);

// (1/|clique|) * sum of x over the clique, summed in the given order.
double CliqueAverage(std::span<const double> x, std::span<const std::size_t> clique);

// One synchronous application of the clique bounded-confidence update.
// Nodes that fail the confidence test keep their value bit-for-bit.
OpinionVector Step(const OpinionVector& x, const CliqueDraw& cliques,
                   const ModelParams& params);

// The m = n update: every clique is V, so the clique average is the mean and
// no randomness is consumed. Bit-identical to Step with full cliques.
OpinionVector GlobalMeanStep(const OpinionVector& x, const ModelParams& params);

// Unchecked kernels used by the simulator; `out` must not alias `x`.
void StepKernel(std::span<const double> x, const CliqueDraw& cliques,
                const ModelParams& params, std::span<double> out) noexcept;
void GlobalMeanKernel(std::span<const double> x, const ModelParams& params,
                      std::span<double> out) noexcept;

struct SimulationOptions {
  RecordingMode recording = RecordingMode::kFull;
  // Trailing steps kept by a streaming record.
  std::uint64_t retained_steps = 1000;
  std::uint64_t trial = 0;
};

// Streaming is the default above this horizon.
inline constexpr std::uint64_t kStreamingHorizonThreshold = 100000;

RecordingMode DefaultRecordingMode(std::uint64_t horizon) noexcept;

// Applies the update `horizon` times starting from x0 (the m = n fast path is
// taken automatically). Pure function of (params, x0, rng.master_seed, trial).
TrajectoryRecord Simulate(const ModelParams& params, const OpinionVector& x0,
                          std::uint64_t horizon, const RngSpec& rng,
                          const SimulationOptions& options = {});

}  // namespace cliquedyn
