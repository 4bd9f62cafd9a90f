// Command-line front end: simulate, montecarlo, sweep, classify, verify,
// density-check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliquedyn/detectors.h"
#include "cliquedyn/dynamics.h"
#include "cliquedyn/error.h"
#include "cliquedyn/initial_conditions.h"
#include "cliquedyn/io.h"
#include "cliquedyn/montecarlo.h"
#include "cliquedyn/order_analytics.h"

namespace cd = cliquedyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfigError = 2;

// Flags shared by every subcommand that builds an ExperimentConfig. Flags
// override values read from --config.
struct ConfigFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::optional<std::string>>> overrides;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "key = value experiment file");
    static const std::pair<const char*, const char*> kFlags[] = {
        {"--n", "n"},
        {"--m", "m"},
        {"--delta", "delta"},
        {"--eta", "eta"},
        {"--clique-policy", "clique_policy"},
        {"--boundary-epsilon", "boundary_epsilon"},
        {"--initial", "initial"},
        {"--initial-k", "initial_k"},
        {"--initial-l", "initial_l"},
        {"--initial-K", "initial_K"},
        {"--initial-beta", "initial_beta"},
        {"--initial-pivot", "initial_pivot"},
        {"--x0", "initial_values"},
        {"--initial-max-tries", "initial_max_tries"},
        {"--horizon", "horizon"},
        {"--trials", "trials"},
        {"--seed", "seed"},
        {"--tol", "tol"},
        {"--window", "window"},
        {"--consensus-tol", "consensus_tol"},
        {"--fluct-threshold", "fluct_threshold"},
        {"--parallelism", "parallelism"},
    };
    overrides.reserve(std::size(kFlags));
    for (const auto& [flag, key] : kFlags) {
      overrides.emplace_back(key, std::nullopt);
      app->add_option(flag, overrides.back().second, std::string("config key ") + key);
    }
  }

  std::optional<std::string> Get(std::string_view key) const {
    for (const auto& [k, v] : overrides) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  cd::ExperimentConfig Build() const {
    cd::ExperimentConfig config;
    if (!config_path.empty()) config = cd::LoadConfigFile(config_path);
    for (const auto& [key, value] : overrides) {
      if (value) cd::ApplyConfigValue(config, key, *value);
    }
    // --x0 implies the explicit kind; without a config file it also sets
    // n = |x0| and m = n unless those are given.
    if (Get("initial_values")) {
      if (!Get("initial")) config.initial.kind = cd::InitialKind::kExplicit;
      if (config_path.empty()) {
        if (!Get("n")) config.params.n = config.initial.values.size();
        if (!Get("m")) config.params.m = config.params.n;
      }
    }
    return config;
  }
};

struct ManifestWriter {
  cd::RunManifest manifest;
  std::string path;

  ManifestWriter(std::string command, const cd::ExperimentConfig& config) {
    manifest.command = std::move(command);
    manifest.config_echo = cd::SerializeConfig(config);
    manifest.tool_version = std::string(cd::kToolVersion);
    manifest.master_seed = config.master_seed;
    manifest.start_time = cd::UtcTimestamp();
  }

  void AddOutput(const std::string& file) {
    manifest.outputs.push_back(file);
    if (path.empty()) path = file + ".manifest.jsonl";
  }

  void Finish() {
    if (path.empty()) return;
    manifest.end_time = cd::UtcTimestamp();
    std::ofstream out(path, std::ios::app);
    cd::Require(static_cast<bool>(out), cd::ErrorKind::kInvalidConfiguration,
                "cannot write manifest " + path);
    out << manifest.ToJsonLine() << '\n';
  }
};

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  cd::Require(static_cast<bool>(out), cd::ErrorKind::kInvalidConfiguration,
              "cannot open output " + path);
  return out;
}

const char* PassFail(bool ok) { return ok ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------------------

struct SimulateCommand {
  ConfigFlags flags;
  std::string out = "trajectory.csv";
  std::string recording;
  std::uint64_t trial = 0;
  std::uint64_t retained = 1000;

  void Register(CLI::App* app) {
    flags.Register(app);
    app->add_option("--out", out, "trajectory CSV");
    app->add_option("--recording", recording, "full | streaming (default by horizon)");
    app->add_option("--trial", trial, "trial index used for seeding");
    app->add_option("--retained", retained, "trailing steps kept when streaming");
  }

  int Run() {
    const cd::ExperimentConfig config = flags.Build();
    config.params.Validate();
    config.initial.Validate(config.params);
    cd::Require(config.horizon >= 1, cd::ErrorKind::kInvalidConfiguration,
                "horizon must be at least 1");
    ManifestWriter manifest("simulate", config);

    const cd::RngSpec rng{config.master_seed};
    cd::RandomStream init = rng.Stream(cd::StreamDomain::kInitialState, trial);
    const cd::OpinionVector x0 = cd::SampleInitial(config.initial, config.params, init);

    cd::SimulationOptions options;
    options.trial = trial;
    options.retained_steps = retained;
    if (recording.empty()) {
      options.recording = cd::DefaultRecordingMode(config.horizon);
    } else if (recording == "full") {
      options.recording = cd::RecordingMode::kFull;
    } else if (recording == "streaming") {
      options.recording = cd::RecordingMode::kStreaming;
    } else {
      cd::Fail(cd::ErrorKind::kInvalidConfiguration, "unknown recording mode " + recording);
    }
    const cd::TrajectoryRecord traj = cd::Simulate(config.params, x0, config.horizon, rng, options);
    std::ofstream csv = OpenOutput(out);
    cd::WriteTrajectoryCsv(csv, traj);
    csv.close();
    manifest.AddOutput(out);
    manifest.Finish();
    std::cout << "wrote " << out << " (" << traj.current_time() - traj.first_available_time() + 1
              << " rows)\n";
    return kExitOk;
  }
};

struct MonteCarloCommand {
  ConfigFlags flags;
  std::string out = "estimates.csv";
  std::string results;

  void Register(CLI::App* app) {
    flags.Register(app);
    app->add_option("--out", out, "estimate table CSV");
    app->add_option("--results", results, "per-trial classifications (JSONL)");
  }

  int Run() {
    const cd::ExperimentConfig config = flags.Build();
    config.Validate();
    ManifestWriter manifest("montecarlo", config);
    const std::vector<cd::TrialResult> trials = cd::RunTrials(config);

    std::vector<cd::ProbabilityEstimate> estimates;
    for (cd::Verdict v : {cd::Verdict::kConsensus, cd::Verdict::kDisagreement,
                          cd::Verdict::kPartialAgreement, cd::Verdict::kFluctuating}) {
      estimates.push_back(cd::EstimateProbability(trials, cd::VerdictName(v), cd::VerdictIs(v)));
    }
    std::ofstream csv = OpenOutput(out);
    cd::WriteEstimateCsv(csv, estimates);
    csv.close();
    manifest.AddOutput(out);
    if (!results.empty()) {
      std::ofstream jsonl = OpenOutput(results);
      for (const cd::TrialResult& r : trials) jsonl << cd::ClassificationJson(r) << '\n';
      manifest.AddOutput(results);
    }
    manifest.Finish();
    for (const auto& e : estimates) {
      std::printf("%-18s %6llu/%llu  p=%.4f  [%.4f, %.4f]  undetermined=%llu\n", e.event.c_str(),
                  static_cast<unsigned long long>(e.successes),
                  static_cast<unsigned long long>(e.successes + e.failures), e.point, e.lower,
                  e.upper, static_cast<unsigned long long>(e.undetermined));
    }
    return kExitOk;
  }
};

struct SweepCommand {
  ConfigFlags flags;
  std::string variable = "eta";
  std::string grid;
  std::string out = "sweep.csv";

  void Register(CLI::App* app) {
    flags.Register(app);
    app->add_option("--variable", variable, "eta | delta");
    app->add_option("--grid", grid, "comma-separated grid values")->required();
    app->add_option("--out", out, "sweep table CSV");
  }

  int Run() {
    const cd::ExperimentConfig config = flags.Build();
    const auto var = cd::ParseSweepVariable(variable);
    cd::Require(var.has_value(), cd::ErrorKind::kInvalidConfiguration,
                "sweep variable must be eta or delta");
    const std::vector<double> values = cd::ParseDoubleList(grid, "grid");
    cd::Require(!values.empty(), cd::ErrorKind::kInvalidConfiguration, "empty grid");
    ManifestWriter manifest("sweep", config);
    const std::vector<cd::SweepRow> rows = cd::PhaseSweep(config, *var, values);
    std::ofstream csv = OpenOutput(out);
    cd::WriteSweepCsv(csv, variable, rows);
    csv.close();
    manifest.AddOutput(out);
    manifest.Finish();
    cd::WriteSweepCsv(std::cout, variable, rows);
    return kExitOk;
  }
};

struct ClassifyCommand {
  std::string x0;
  double eta = 0.1;

  void Register(CLI::App* app) {
    app->add_option("--x0", x0, "comma-separated initial opinions")->required();
    app->add_option("--eta", eta, "confidence level");
  }

  int Run() {
    cd::ModelParams params;
    params.eta = eta;
    const std::vector<double> values = cd::ParseDoubleList(x0, "x0");
    params.n = params.m = values.size();
    params.Validate();
    const cd::RegionLabel label = cd::ClassifyRegion(values, params);
    nlohmann::json j = {
        {"region", label.ToString()},
        {"ordering", label.ordering},
        {"istar1", cd::MembershipIstar(values, params, 1)},
        {"istar2", cd::MembershipIstar(values, params, 2)},
        {"istar3", cd::MembershipIstar(values, params, 3)},
    };
    std::cout << j.dump() << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  ConfigFlags flags;
  std::string nodes;             // 1-based node labels
  std::size_t pivot = 0;         // lemma1
  std::uint64_t instances = 100;  // lemma1 random instances when no x0
};

bool VerifyTheorem3(const cd::ExperimentConfig& config) {
  const std::vector<double>& x0 = config.initial.values;
  const std::size_t n = x0.size();
  const double mean = std::accumulate(x0.begin(), x0.end(), 0.0) / static_cast<double>(n);
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(x0[i] - mean) <= config.params.eta) inside.push_back(i);
  }
  cd::Require(inside.size() == 1, cd::ErrorKind::kPreconditionViolation,
              "theorem3 needs exactly one node inside the band of the mean");
  const std::size_t node = inside.front();
  const cd::OrderedStats order = cd::ComputeOrderedStats(x0);
  const std::size_t rank =
      static_cast<std::size_t>(std::find(order.permutation.begin(), order.permutation.end(), node) -
                               order.permutation.begin()) +
      1;
  const double predicted = cd::Theorem3Limit(x0, rank, config.params.eta);
  const cd::TrajectoryRecord traj =
      cd::Simulate(config.params, cd::OpinionVector{x0, 0}, config.horizon, cd::RngSpec{config.master_seed});
  const std::vector<double> final_state = traj.final_state().values;
  const double error = std::abs(final_state[node] - predicted);
  bool others = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != node && final_state[i] != x0[i]) others = false;
  }
  const bool ok = error <= 1e-8 && others;
  std::printf("theorem3: node %zu limit %.6f simulated %.12f error %.3g others-frozen %s  %s\n",
              node + 1, predicted, final_state[node], error, others ? "yes" : "no", PassFail(ok));
  return ok;
}

bool VerifyTStar(const cd::ExperimentConfig& config) {
  const std::vector<double>& x0 = config.initial.values;
  const std::uint64_t predicted = cd::TStar(x0, config.params);
  const std::uint64_t horizon = std::max<std::uint64_t>(config.horizon, predicted + 1);
  const cd::TrajectoryRecord traj =
      cd::Simulate(config.params, cd::OpinionVector{x0, 0}, horizon, cd::RngSpec{config.master_seed});
  std::optional<std::uint64_t> observed;
  for (std::uint64_t t = 0; t <= horizon && !observed; ++t) {
    const auto x = traj.State(t);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (x[1] - mean <= config.params.eta) observed = t;
  }
  const bool ok = observed && *observed == predicted;
  std::printf("tstar: predicted %llu observed %s  %s\n", static_cast<unsigned long long>(predicted),
              observed ? std::to_string(*observed).c_str() : "none", PassFail(ok));
  return ok;
}

bool VerifyFrozen(const cd::ExperimentConfig& config, const std::string& node_list) {
  const cd::RngSpec rng{config.master_seed};
  cd::RandomStream init = rng.Stream(cd::StreamDomain::kInitialState, 0);
  const cd::OpinionVector x0 = cd::SampleInitial(config.initial, config.params, init);
  std::vector<std::size_t> nodes;
  if (node_list.empty()) {
    nodes.resize(config.params.n);
    std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  } else {
    for (std::size_t label : cd::ParseIndexList(node_list, "nodes")) {
      cd::Require(label >= 1 && label <= config.params.n, cd::ErrorKind::kInvalidConfiguration,
                  "node labels are 1-based and at most n");
      nodes.push_back(label - 1);
    }
  }
  cd::SimulationOptions options;
  options.recording = cd::RecordingMode::kStreaming;
  options.retained_steps = 1;
  const cd::TrajectoryRecord traj = cd::Simulate(config.params, x0, config.horizon, rng, options);
  const bool ok = cd::FrozenNodesCheck(traj, nodes);
  std::printf("frozen: %zu node(s) over T=%llu  %s\n", nodes.size(),
              static_cast<unsigned long long>(config.horizon), PassFail(ok));
  return ok;
}

bool VerifyLemma1(const cd::ExperimentConfig& config, std::size_t pivot, std::uint64_t instances) {
  const std::size_t n = config.params.n;
  const std::size_t m = config.params.m;
  const std::size_t s = pivot != 0 ? pivot : (n + 1) / 2;
  std::vector<std::vector<double>> states;
  if (config.initial.kind == cd::InitialKind::kExplicit) {
    states.push_back(config.initial.values);
  } else {
    const cd::RngSpec rng{config.master_seed};
    for (std::uint64_t r = 0; r < instances; ++r) {
      cd::RandomStream stream = rng.Stream(cd::StreamDomain::kInitialState, r);
      states.push_back(cd::SampleUniform(n, stream).values);
    }
  }
  std::size_t failing = 0;
  std::size_t gap_lo = 0, gap_hi = 0, dia_lo = 0, dia_hi = 0, adj_lo = 0, adj_hi = 0;
  for (const auto& x : states) {
    const cd::ClusterAnalysis analysis = cd::ComputeQuotientPartition(x, s, m);
    const cd::Lemma1Report report = cd::VerifyLemma1Bounds(analysis);
    if (!report.all_hold()) ++failing;
    gap_lo += report.gap_lower_failures;
    gap_hi += report.gap_upper_failures;
    dia_lo += report.diameter_lower_failures;
    dia_hi += report.diameter_upper_failures;
    adj_lo += report.adjacent_lower_failures;
    adj_hi += report.adjacent_upper_failures;
  }
  std::printf(
      "lemma1: %zu/%zu instance(s) violate a bound (n=%zu m=%zu s=%zu); class failures: "
      "gap>=%zu gap<=%zu diameter>=%zu diameter<=%zu adjacent>=%zu adjacent<=%zu  %s\n",
      failing, states.size(), n, m, s, gap_lo, gap_hi, dia_lo, dia_hi, adj_lo, adj_hi,
      PassFail(failing == 0));
  return failing == 0;
}

int RunVerify(const std::string& suite, const VerifyOptions& opts) {
  if (suite != "all") {
    const cd::ExperimentConfig config = opts.flags.Build();
    config.params.Validate();
    config.initial.Validate(config.params);
    bool ok = false;
    if (suite == "theorem3") {
      ok = VerifyTheorem3(config);
    } else if (suite == "tstar") {
      ok = VerifyTStar(config);
    } else if (suite == "frozen") {
      ok = VerifyFrozen(config, opts.nodes);
    } else {
      ok = VerifyLemma1(config, opts.pivot, opts.instances);
    }
    return ok ? kExitOk : kExitVerificationFailed;
  }

  // Built-in instances.
  bool ok = true;
  {
    cd::ExperimentConfig c;
    c.params = {4, 4, 0.5, 0.1};
    c.initial.kind = cd::InitialKind::kExplicit;
    c.initial.values = {0.0, 0.5, 0.9, 1.0};
    c.horizon = 2000;
    ok &= VerifyTheorem3(c);
  }
  {
    cd::ExperimentConfig c;
    c.params = {5, 5, 0.5, 0.1};
    c.initial.kind = cd::InitialKind::kExplicit;
    // mean 0.5; node 1 inside the band below, node 2 just outside above.
    c.initial.values = {0.45, 0.607, 0.0, 0.7, 0.743};
    c.horizon = 100;
    ok &= VerifyTStar(c);
  }
  {
    cd::ExperimentConfig c;
    c.params = {4, 4, 0.5, 0.15};
    c.initial.kind = cd::InitialKind::kIstar2;
    c.horizon = 10000;
    ok &= VerifyFrozen(c, "");
  }
  {
    cd::ExperimentConfig c;
    c.params = {6, 4, 0.5, 0.1};
    ok &= VerifyLemma1(c, 3, 100);
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

struct DensityCommand {
  std::size_t n = 6;
  std::string ranks = "2,4";
  std::size_t samples = 100000;
  std::size_t bins = 20;
  std::uint64_t seed = 0;
  double max_error = 0.05;

  void Register(CLI::App* app) {
    app->add_option("--n", n, "sample size (<= 12)");
    app->add_option("--ranks", ranks, "1-based order-statistic ranks");
    app->add_option("--samples", samples, "Monte Carlo samples");
    app->add_option("--bins", bins, "bins per axis");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--max-error", max_error, "allowed mean bin error relative to the peak");
  }

  int Run() {
    const std::vector<std::size_t> r = cd::ParseIndexList(ranks, "ranks");
    const cd::DensityReport report = cd::ValidateOrderStatDensity(n, r, samples, bins, seed);
    const bool ok = report.relative_error < max_error && std::abs(report.normalization - 1.0) < 0.01;
    std::printf("density: relative error %.4f (limit %.4f) peak %.4f normalization %.5f  %s\n",
                report.relative_error, max_error, report.peak, report.normalization, PassFail(ok));
    return ok ? kExitOk : kExitVerificationFailed;
  }
};

int ExitCodeFor(const cd::Error& e) {
  switch (e.kind()) {
    case cd::ErrorKind::kInvalidConfiguration:
    case cd::ErrorKind::kInvalidArgument:
    case cd::ErrorKind::kPreconditionViolation:
    case cd::ErrorKind::kCapacityExceeded:
      return kExitConfigError;
    default:
      return kExitVerificationFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clique-based bounded-confidence opinion dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cd::kToolVersion));

  SimulateCommand simulate;
  simulate.Register(app.add_subcommand("simulate", "simulate one trajectory and write a CSV"));
  MonteCarloCommand montecarlo;
  montecarlo.Register(app.add_subcommand("montecarlo", "estimate outcome probabilities"));
  SweepCommand sweep;
  sweep.Register(app.add_subcommand("sweep", "fluctuation frequency over an eta or delta grid"));
  ClassifyCommand classify;
  classify.Register(app.add_subcommand("classify", "label the m = n region of an initial state"));

  CLI::App* verify = app.add_subcommand("verify", "run closed-form oracle checks");
  std::string suite;
  VerifyOptions verify_opts;
  verify->add_option("suite", suite, "theorem3 | tstar | frozen | lemma1 | all")
      ->required()
      ->check(CLI::IsMember({"theorem3", "tstar", "frozen", "lemma1", "all"}));
  verify_opts.flags.Register(verify);
  verify->add_option("--nodes", verify_opts.nodes, "frozen: 1-based node labels");
  verify->add_option("--pivot", verify_opts.pivot, "lemma1: pivot rank s");
  verify->add_option("--instances", verify_opts.instances, "lemma1: random instances");

  DensityCommand density;
  density.Register(app.add_subcommand("density-check", "compare order-statistic histograms"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfigError;
  }

  try {
    if (app.got_subcommand("simulate")) return simulate.Run();
    if (app.got_subcommand("montecarlo")) return montecarlo.Run();
    if (app.got_subcommand("sweep")) return sweep.Run();
    if (app.got_subcommand("classify")) return classify.Run();
    if (app.got_subcommand("verify")) return RunVerify(suite, verify_opts);
    if (app.got_subcommand("density-check")) return density.Run();
  } catch (const cd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return kExitConfigError;
}
