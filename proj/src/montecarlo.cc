#include "cliquedyn/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "cliquedyn/dynamics.h"
#include "cliquedyn/error.h"
#include "cliquedyn/order_analytics.h"
#include "cliquedyn/rng.h"

namespace cliquedyn {

void ExperimentConfig::Validate() const {
  params.Validate();
  initial.Validate(params);
  Require(trials >= 1, ErrorKind::kInvalidConfiguration, "trials must be at least 1");
  Require(horizon >= 1, ErrorKind::kInvalidConfiguration, "horizon must be at least 1");
  const DetectorThresholds t = ResolvedThresholds();
  Require(t.tol > 0.0 && t.consensus_tol > 0.0 && t.fluct_threshold > 0.0,
          ErrorKind::kInvalidConfiguration, "detector thresholds must be positive");
  Require(t.window >= 1 && 2 * t.window <= horizon, ErrorKind::kInvalidConfiguration,
          "window " + std::to_string(t.window) + " needs horizon >= " +
              std::to_string(2 * t.window));
}

DetectorThresholds ExperimentConfig::ResolvedThresholds() const {
  DetectorThresholds t = DetectorThresholds::Defaults(params, horizon);
  if (thresholds.tol) {
    t.tol = *thresholds.tol;
    t.consensus_tol = 10.0 * t.tol;
  }
  if (thresholds.window) t.window = *thresholds.window;
  if (thresholds.consensus_tol) t.consensus_tol = *thresholds.consensus_tol;
  if (thresholds.fluct_threshold) t.fluct_threshold = *thresholds.fluct_threshold;
  return t;
}

std::size_t DefaultParallelism() {
  if (const char* env = std::getenv(std::string(kThreadsEnvVar).c_str())) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TrialResult RunTrial(const ExperimentConfig& config, std::uint64_t trial) {
  const RngSpec rng{config.master_seed};
  RandomStream init_stream = rng.Stream(StreamDomain::kInitialState, trial);
  TrialResult result;
  result.trial = trial;
  result.initial = SampleInitial(config.initial, config.params, init_stream);

  const DetectorThresholds thresholds = config.ResolvedThresholds();
  SimulationOptions options;
  options.recording = DefaultRecordingMode(config.horizon);
  options.retained_steps = thresholds.window;
  options.trial = trial;
  const TrajectoryRecord traj =
      Simulate(config.params, result.initial, config.horizon, rng, options);
  result.classification = Classify(traj, thresholds);
  return result;
}

std::vector<TrialResult> RunTrials(const ExperimentConfig& config) {
  config.Validate();
  const std::uint64_t count = config.trials;
  std::vector<TrialResult> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};

  const auto worker = [&] {
    for (std::uint64_t r = next++; r < count; r = next++) {
      try {
        results[r] = RunTrial(config, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  std::size_t threads = config.parallelism == 0 ? DefaultParallelism() : config.parallelism;
  threads = static_cast<std::size_t>(std::min<std::uint64_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::uint64_t r = 0; r < count; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const Error& e) {
      throw Error(e.kind(), "trial " + std::to_string(r) + ": " + e.what());
    }
  }
  return results;
}

WilsonInterval Wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  Require(trials > 0, ErrorKind::kDegenerateEstimate, "Wilson interval of zero trials");
  Require(successes <= trials, ErrorKind::kInvalidArgument, "successes exceed trials");
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

EventPredicate VerdictIs(Verdict verdict) {
  return [verdict](const ClassificationResult& c) { return c.verdict == verdict; };
}

ProbabilityEstimate EstimateProbability(std::span<const TrialResult> results,
                                        std::string_view event,
                                        const EventPredicate& predicate) {
  Require(!results.empty(), ErrorKind::kDegenerateEstimate, "no trials");
  ProbabilityEstimate est;
  est.event = std::string(event);
  est.trials = results.size();
  for (const TrialResult& r : results) {
    if (r.classification.verdict == Verdict::kUndetermined) {
      ++est.undetermined;
    } else if (predicate(r.classification)) {
      ++est.successes;
    } else {
      ++est.failures;
    }
  }
  const std::uint64_t determined = est.successes + est.failures;
  Require(determined > 0, ErrorKind::kDegenerateEstimate,
          "all " + std::to_string(est.trials) + " trials are undetermined");
  est.point = static_cast<double>(est.successes) / static_cast<double>(determined);
  const WilsonInterval ci = Wilson(est.successes, determined);
  est.lower = std::min(ci.lower, est.point);
  est.upper = std::max(ci.upper, est.point);
  return est;
}

std::array<std::uint64_t, kVerdictCount> CountVerdicts(std::span<const TrialResult> results) {
  std::array<std::uint64_t, kVerdictCount> counts{};
  for (const TrialResult& r : results) ++counts[static_cast<std::size_t>(r.classification.verdict)];
  return counts;
}

DensityReport ValidateOrderStatDensity(std::size_t n, std::span<const std::size_t> ranks,
                                       std::size_t samples, std::size_t bins,
                                       std::uint64_t seed, std::size_t subdivisions) {
  Require(samples > 0, ErrorKind::kDegenerateEstimate, "density check needs samples");
  Require(n >= 1 && n <= 12, ErrorKind::kInvalidArgument, "density check supports 1 <= n <= 12");
  const std::size_t k = ranks.size();
  Require(k >= 1 && k <= 3, ErrorKind::kInvalidArgument, "density check supports 1 to 3 ranks");
  for (std::size_t j = 0; j < k; ++j) {
    Require(ranks[j] >= 1 && ranks[j] <= n && (j == 0 || ranks[j] > ranks[j - 1]),
            ErrorKind::kInvalidArgument, "ranks must be strictly increasing within [1, n]");
  }
  Require(bins >= 1 && subdivisions >= 1, ErrorKind::kInvalidArgument,
          "bins and subdivisions must be positive");

  std::size_t cells = 1;
  for (std::size_t j = 0; j < k; ++j) cells *= bins;
  std::vector<std::uint64_t> counts(cells, 0);

  RandomStream stream = RngSpec{seed}.Stream(StreamDomain::kAuxiliary, 0);
  std::vector<double> u(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& v : u) v = stream.Uniform01();
    std::sort(u.begin(), u.end());
    std::size_t cell = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto b = std::min(bins - 1, static_cast<std::size_t>(u[ranks[j] - 1] * bins));
      cell = cell * bins + b;
    }
    ++counts[cell];
  }

  const double width = 1.0 / static_cast<double>(bins);
  const double cell_volume = std::pow(width, static_cast<double>(k));
  std::size_t sub_cells = 1;
  for (std::size_t j = 0; j < k; ++j) sub_cells *= subdivisions;

  DensityReport report;
  report.samples = samples;
  report.bins = bins;
  double abs_error = 0.0;
  std::vector<std::size_t> bin_index(k), sub_index(k);
  std::vector<double> point(k);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (std::size_t j = k; j-- > 0;) {
      bin_index[j] = rest % bins;
      rest /= bins;
    }
    double exact = 0.0;
    for (std::size_t sc = 0; sc < sub_cells; ++sc) {
      std::size_t srest = sc;
      for (std::size_t j = k; j-- > 0;) {
        sub_index[j] = srest % subdivisions;
        srest /= subdivisions;
        point[j] = width * (static_cast<double>(bin_index[j]) +
                            (static_cast<double>(sub_index[j]) + 0.5) /
                                static_cast<double>(subdivisions));
      }
      exact += OrderStatDensity(ranks, point, n);
    }
    exact /= static_cast<double>(sub_cells);
    const double empirical =
        static_cast<double>(counts[cell]) / (static_cast<double>(samples) * cell_volume);
    abs_error += std::abs(empirical - exact);
    report.peak = std::max(report.peak, exact);
    report.normalization += exact * cell_volume;
  }
  report.mean_abs_error = abs_error / static_cast<double>(cells);
  report.relative_error = report.peak > 0.0 ? report.mean_abs_error / report.peak : 0.0;
  return report;
}

std::string_view SweepVariableName(SweepVariable variable) {
  return variable == SweepVariable::kEta ? "eta" : "delta";
}

std::optional<SweepVariable> ParseSweepVariable(std::string_view name) {
  if (name == "eta") return SweepVariable::kEta;
  if (name == "delta") return SweepVariable::kDelta;
  return std::nullopt;
}

std::vector<SweepRow> PhaseSweep(const ExperimentConfig& base, SweepVariable variable,
                                 std::span<const double> grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double value : grid) {
    Require(std::isfinite(value), ErrorKind::kInvalidConfiguration, "non-finite grid value");
    ExperimentConfig config = base;
    if (variable == SweepVariable::kEta) {
      config.params.eta = value;
    } else {
      config.params.delta = value;
    }
    const std::vector<TrialResult> results = RunTrials(config);
    SweepRow row;
    row.value = value;
    row.verdicts = CountVerdicts(results);
    if (row.verdicts[static_cast<std::size_t>(Verdict::kUndetermined)] == results.size()) {
      // Nothing determined at this point: keep the row, report an empty estimate.
      row.fluctuation.event = "fluctuation";
      row.fluctuation.undetermined = results.size();
      row.fluctuation.trials = results.size();
      row.fluctuation.point = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.fluctuation =
          EstimateProbability(results, "fluctuation", VerdictIs(Verdict::kFluctuating));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cliquedyn
