#include "cliquedyn/model.h"

#include <cmath>
#include <string>

#include "cliquedyn/error.h"

namespace cliquedyn {

std::string_view CliquePolicyName(CliquePolicy policy) {
  switch (policy) {
    case CliquePolicy::kUniformAllSubsets: return "uniform-all-subsets";
    case CliquePolicy::kUniformExcludingSelf: return "uniform-excluding-self";
  }
  return "unknown";
}

std::optional<CliquePolicy> ParseCliquePolicy(std::string_view name) {
  if (name == "uniform-all-subsets") return CliquePolicy::kUniformAllSubsets;
  if (name == "uniform-excluding-self") return CliquePolicy::kUniformExcludingSelf;
  return std::nullopt;
}

void ModelParams::Validate() const {
  const auto bad = [](const std::string& what) {
    Fail(ErrorKind::kInvalidConfiguration, what);
  };
  if (n < 2) bad("n must be at least 2 (got " + std::to_string(n) + ")");
  if (m < 1) bad("m must be at least 1");
  if (m > n) {
    bad("m must not exceed n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  if (clique_policy == CliquePolicy::kUniformExcludingSelf && m > n - 1) {
    bad("m must not exceed n-1 when cliques exclude the node itself");
  }
  if (!(delta > 0.0 && delta < 1.0)) bad("delta must lie in (0, 1)");
  if (!(eta > 0.0) || !std::isfinite(eta)) bad("eta must be positive and finite");
  if (!(boundary_epsilon >= 0.0) || !std::isfinite(boundary_epsilon)) {
    bad("boundary_epsilon must be non-negative and finite");
  }
}

CliqueDraw::CliqueDraw(std::size_t n, std::size_t m, std::uint64_t time)
    : n_(n), m_(m), time_(time), flat_(n * m, 0) {}

}  // namespace cliquedyn
