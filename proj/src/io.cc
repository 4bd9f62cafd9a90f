#include "cliquedyn/io.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cliquedyn/error.h"

namespace cliquedyn {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(std::string_view what, std::string_view text) {
  Fail(ErrorKind::kInvalidConfiguration,
       "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
}

std::string JoinDoubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += FormatDouble(values[i]);
  }
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view text, std::string_view what) {
  const std::string_view t = Trim(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() ||
      !std::isfinite(value)) {
    BadValue(what, text);
  }
  return value;
}

std::uint64_t ParseUnsigned(std::string_view text, std::string_view what) {
  const std::string_view t = Trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) BadValue(what, text);
  return value;
}

std::vector<double> ParseDoubleList(std::string_view text, std::string_view what) {
  std::vector<double> out;
  if (Trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(ParseDouble(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> ParseIndexList(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  if (Trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(ParseUnsigned(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void ApplyConfigValue(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = Trim(raw);
  const auto size = [&](std::string_view what) {
    return static_cast<std::size_t>(ParseUnsigned(value, what));
  };
  if (key == "n") {
    c.params.n = size(key);
  } else if (key == "m") {
    c.params.m = size(key);
  } else if (key == "delta") {
    c.params.delta = ParseDouble(value, key);
  } else if (key == "eta") {
    c.params.eta = ParseDouble(value, key);
  } else if (key == "clique_policy") {
    const auto policy = ParseCliquePolicy(value);
    if (!policy) BadValue(key, value);
    c.params.clique_policy = *policy;
  } else if (key == "boundary_epsilon") {
    c.params.boundary_epsilon = ParseDouble(value, key);
  } else if (key == "initial") {
    const auto kind = ParseInitialKind(value);
    if (!kind) BadValue(key, value);
    c.initial.kind = *kind;
  } else if (key == "initial_k") {
    c.initial.k = size(key);
  } else if (key == "initial_l") {
    c.initial.l = size(key);
  } else if (key == "initial_K") {
    c.initial.big_k = size(key);
  } else if (key == "initial_beta") {
    c.initial.beta = ParseDouble(value, key);
  } else if (key == "initial_pivot") {
    c.initial.pivot_rank = size(key);
  } else if (key == "initial_values") {
    c.initial.values = ParseDoubleList(value, key);
  } else if (key == "initial_max_tries") {
    c.initial.max_tries = ParseUnsigned(value, key);
  } else if (key == "horizon") {
    c.horizon = ParseUnsigned(value, key);
  } else if (key == "trials") {
    c.trials = ParseUnsigned(value, key);
  } else if (key == "seed") {
    c.master_seed = ParseUnsigned(value, key);
  } else if (key == "tol") {
    c.thresholds.tol = ParseDouble(value, key);
  } else if (key == "window") {
    c.thresholds.window = ParseUnsigned(value, key);
  } else if (key == "consensus_tol") {
    c.thresholds.consensus_tol = ParseDouble(value, key);
  } else if (key == "fluct_threshold") {
    c.thresholds.fluct_threshold = ParseDouble(value, key);
  } else if (key == "parallelism") {
    c.parallelism = size(key);
  } else {
    Fail(ErrorKind::kInvalidConfiguration, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto eol = text.find('\n', start);
    std::string_view line =
        text.substr(start, eol == std::string_view::npos ? std::string_view::npos : eol - start);
    ++line_no;
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorKind::kInvalidConfiguration,
           "line " + std::to_string(line_no) + ": expected key = value");
    }
    ApplyConfigValue(config, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

std::string SerializeConfig(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n = " << c.params.n << '\n'
      << "m = " << c.params.m << '\n'
      << "delta = " << FormatDouble(c.params.delta) << '\n'
      << "eta = " << FormatDouble(c.params.eta) << '\n'
      << "clique_policy = " << CliquePolicyName(c.params.clique_policy) << '\n'
      << "boundary_epsilon = " << FormatDouble(c.params.boundary_epsilon) << '\n'
      << "initial = " << InitialKindName(c.initial.kind) << '\n'
      << "initial_k = " << c.initial.k << '\n'
      << "initial_l = " << c.initial.l << '\n'
      << "initial_K = " << c.initial.big_k << '\n'
      << "initial_beta = " << FormatDouble(c.initial.beta) << '\n'
      << "initial_pivot = " << c.initial.pivot_rank << '\n'
      << "initial_values = " << JoinDoubles(c.initial.values) << '\n'
      << "initial_max_tries = " << c.initial.max_tries << '\n'
      << "horizon = " << c.horizon << '\n'
      << "trials = " << c.trials << '\n'
      << "seed = " << c.master_seed << '\n';
  if (c.thresholds.tol) out << "tol = " << FormatDouble(*c.thresholds.tol) << '\n';
  if (c.thresholds.window) out << "window = " << *c.thresholds.window << '\n';
  if (c.thresholds.consensus_tol) {
    out << "consensus_tol = " << FormatDouble(*c.thresholds.consensus_tol) << '\n';
  }
  if (c.thresholds.fluct_threshold) {
    out << "fluct_threshold = " << FormatDouble(*c.thresholds.fluct_threshold) << '\n';
  }
  out << "parallelism = " << c.parallelism << '\n';
  return out.str();
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  Require(static_cast<bool>(in), ErrorKind::kInvalidConfiguration,
          "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

void WriteTrajectoryCsv(std::ostream& out, const TrajectoryRecord& traj) {
  out << 't';
  for (std::size_t i = 1; i <= traj.node_count(); ++i) out << ",x_" << i;
  out << '\n';
  for (std::uint64_t t = traj.first_available_time(); t <= traj.current_time(); ++t) {
    out << t;
    for (double v : traj.State(t)) out << ',' << FormatDouble(v);
    out << '\n';
  }
}

void WriteSweepCsv(std::ostream& out, std::string_view variable,
                   std::span<const SweepRow> rows) {
  out << variable << ",trials,fluct_rate,ci_lo,ci_hi,undetermined\n";
  for (const SweepRow& row : rows) {
    const ProbabilityEstimate& e = row.fluctuation;
    out << FormatDouble(row.value) << ',' << e.trials << ',' << FormatDouble(e.point) << ','
        << FormatDouble(e.lower) << ',' << FormatDouble(e.upper) << ',' << e.undetermined
        << '\n';
  }
}

void WriteEstimateCsv(std::ostream& out, std::span<const ProbabilityEstimate> estimates) {
  out << "event,successes,failures,undetermined,trials,point,ci_lo,ci_hi\n";
  for (const ProbabilityEstimate& e : estimates) {
    out << e.event << ',' << e.successes << ',' << e.failures << ',' << e.undetermined << ','
        << e.trials << ',' << FormatDouble(e.point) << ',' << FormatDouble(e.lower) << ','
        << FormatDouble(e.upper) << '\n';
  }
}

std::string ClassificationJson(const TrialResult& result) {
  const ClassificationResult& c = result.classification;
  nlohmann::json last_change = nlohmann::json::array();
  for (const auto& lc : c.last_change) {
    last_change.push_back(lc ? nlohmann::json(*lc) : nlohmann::json(nullptr));
  }
  const nlohmann::json j = {
      {"trial", result.trial},
      {"verdict", VerdictName(c.verdict)},
      {"window", c.window},
      {"initial", result.initial.values},
      {"limits", c.limits},
      {"amplitudes", c.amplitudes},
      {"frozen", c.frozen},
      {"last_change", last_change},
  };
  return j.dump();
}

std::string RunManifest::ToJsonLine() const {
  const nlohmann::json j = {
      {"command", command},       {"tool_version", tool_version},
      {"master_seed", master_seed}, {"start_time", start_time},
      {"end_time", end_time},     {"outputs", outputs},
      {"config", config_echo},
  };
  return j.dump();
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cliquedyn
