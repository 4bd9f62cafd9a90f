#include "cliquedyn/dynamics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cliquedyn/error.h"

namespace cliquedyn {

CliqueSampler::CliqueSampler(const ModelParams& params)
    : n_(params.n), m_(params.m), policy_(params.clique_policy), marks_(params.n, 0) {
  params.Validate();
}

void CliqueSampler::SampleSet(std::size_t node, RandomStream& stream,
                              std::span<std::size_t> out) {
  const bool exclude_self = policy_ == CliquePolicy::kUniformExcludingSelf;
  const std::size_t pool = exclude_self ? n_ - 1 : n_;
  std::size_t filled = 0;
  for (std::size_t j = pool - m_; j < pool; ++j) {
    const auto t = static_cast<std::size_t>(stream.Below(j + 1));
    const std::size_t pick = marks_[t] ? j : t;
    marks_[pick] = 1;
    out[filled++] = pick;
  }
  for (std::size_t k = 0; k < m_; ++k) {
    marks_[out[k]] = 0;
    if (exclude_self && out[k] >= node) ++out[k];
  }
  std::sort(out.begin(), out.end());
}

void CliqueSampler::SampleInto(const RngSpec& rng, std::uint64_t trial,
                               std::uint64_t time, CliqueDraw& out) {
  if (out.node_count() != n_ || out.clique_size() != m_) out = CliqueDraw(n_, m_, time);
  out.set_time(time);
  for (std::size_t i = 0; i < n_; ++i) {
    RandomStream stream = rng.Stream(StreamDomain::kCliques, trial, time, i);
    SampleSet(i, stream, out.MutableSet(i));
  }
}

CliqueDraw SampleCliques(const ModelParams& params, std::uint64_t time,
                         const RngSpec& rng, std::uint64_t trial) {
  CliqueSampler sampler(params);
  CliqueDraw draw(params.n, params.m, time);
  sampler.SampleInto(rng, trial, time, draw);
  return draw;
}

double CliqueAverage(std::span<const double> x, std::span<const std::size_t> clique) {
  Require(!clique.empty(), ErrorKind::kInvalidArgument, "empty clique");
  double sum = 0.0;
  for (std::size_t j : clique) {
    Require(j < x.size(), ErrorKind::kInvalidArgument,
            "clique index " + std::to_string(j) + " out of range");
    sum += x[j];
  }
  return sum / static_cast<double>(clique.size());
}

namespace {

inline double Update(double xi, double yi, double threshold, double delta) noexcept {
  return std::abs(xi - yi) <= threshold ? (1.0 - delta) * xi + delta * yi : xi;
}

}  // namespace

void StepKernel(std::span<const double> x, const CliqueDraw& cliques,
                const ModelParams& params, std::span<double> out) noexcept {
  const double threshold = params.eta + params.boundary_epsilon;
  const double m = static_cast<double>(cliques.clique_size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j : cliques.Set(i)) sum += x[j];
    out[i] = Update(x[i], sum / m, threshold, params.delta);
  }
}

void GlobalMeanKernel(std::span<const double> x, const ModelParams& params,
                      std::span<double> out) noexcept {
  const double threshold = params.eta + params.boundary_epsilon;
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = Update(x[i], mean, threshold, params.delta);
  }
}

OpinionVector Step(const OpinionVector& x, const CliqueDraw& cliques,
                   const ModelParams& params) {
  params.Validate();
  Require(x.size() == params.n && cliques.node_count() == params.n,
          ErrorKind::kInvalidArgument, "dimension mismatch between state, cliques and n");
  Require(cliques.clique_size() == params.m, ErrorKind::kInvalidArgument,
          "clique size differs from m");
  Require(x.time == cliques.time(), ErrorKind::kInvalidArgument,
          "clique draw time differs from state time");
  for (std::size_t i = 0; i < params.n; ++i) {
    for (std::size_t j : cliques.Set(i)) {
      Require(j < params.n, ErrorKind::kInvalidArgument, "clique index out of range");
    }
  }
  OpinionVector next{std::vector<double>(params.n), x.time + 1};
  StepKernel(x.values, cliques, params, next.values);
  return next;
}

OpinionVector GlobalMeanStep(const OpinionVector& x, const ModelParams& params) {
  params.Validate();
  Require(params.m == params.n, ErrorKind::kInvalidConfiguration,
          "global mean step requires m = n");
  Require(x.size() == params.n, ErrorKind::kInvalidArgument, "dimension mismatch");
  OpinionVector next{std::vector<double>(params.n), x.time + 1};
  GlobalMeanKernel(x.values, params, next.values);
  return next;
}

RecordingMode DefaultRecordingMode(std::uint64_t horizon) noexcept {
  return horizon > kStreamingHorizonThreshold ? RecordingMode::kStreaming
                                              : RecordingMode::kFull;
}

TrajectoryRecord Simulate(const ModelParams& params, const OpinionVector& x0,
                          std::uint64_t horizon, const RngSpec& rng,
                          const SimulationOptions& options) {
  params.Validate();
  Require(x0.size() == params.n, ErrorKind::kInvalidArgument,
          "initial state has " + std::to_string(x0.size()) + " entries, expected n=" +
              std::to_string(params.n));

  TrajectoryRecord record(options.recording, horizon, options.retained_steps, x0);
  std::vector<double> current = x0.values;
  std::vector<double> next(params.n);
  const bool deterministic = params.m == params.n &&
                             params.clique_policy == CliquePolicy::kUniformAllSubsets;

  CliqueSampler sampler(params);
  CliqueDraw draw(params.n, params.m, x0.time);
  for (std::uint64_t step = 0; step < horizon; ++step) {
    const std::uint64_t t = x0.time + step;
    if (deterministic) {
      GlobalMeanKernel(current, params, next);
    } else {
      sampler.SampleInto(rng, options.trial, t, draw);
      StepKernel(current, draw, params, next);
    }
    record.Push(next);
    current.swap(next);
  }
  return record;
}

}  // namespace cliquedyn
