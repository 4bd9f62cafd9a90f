#include "cliquedyn/initial_conditions.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cliquedyn/error.h"
#include "cliquedyn/order_analytics.h"

namespace cliquedyn {

namespace {

struct KindName {
  InitialKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {InitialKind::kUniform, "uniform"},   {InitialKind::kA, "A_k"},
    {InitialKind::kB, "B_kl"},            {InitialKind::kC1, "C1"},
    {InitialKind::kC2, "C2"},             {InitialKind::kIstar1, "Istar1"},
    {InitialKind::kIstar2, "Istar2"},     {InitialKind::kIstar3, "Istar3"},
    {InitialKind::kEK0, "E_K0"},          {InitialKind::kTheorem4Gamma, "Theorem4Gamma"},
    {InitialKind::kExplicit, "explicit"},
};

double Mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

std::vector<double> Sorted(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

std::uint64_t CheckedTries(std::uint64_t tries) { return tries == 0 ? 1 : tries; }

[[noreturn]] void SamplingFailure(std::string_view what, std::uint64_t tries) {
  Fail(ErrorKind::kSamplingFailure, std::string(what) + ": no admissible state in " +
                                        std::to_string(tries) + " tries");
}

OpinionVector RejectRegion(const InitialSpec& spec, const ModelParams& params,
                           RandomStream& stream) {
  const std::uint64_t tries = CheckedTries(spec.max_tries);
  for (std::uint64_t attempt = 0; attempt < tries; ++attempt) {
    OpinionVector x = SampleUniform(params.n, stream);
    const RegionLabel label = ClassifyRegion(x.values, params);
    bool hit = false;
    switch (spec.kind) {
      case InitialKind::kA: hit = label.kind == RegionKind::kA && label.k == spec.k; break;
      case InitialKind::kB:
        hit = label.kind == RegionKind::kB && label.k == spec.k && label.l == spec.l;
        break;
      case InitialKind::kC1: hit = label.kind == RegionKind::kC1; break;
      case InitialKind::kC2: hit = label.kind == RegionKind::kC2; break;
      default: break;
    }
    if (hit) return ApplyOrdering(x.values, label.ordering);
  }
  SamplingFailure(InitialKindName(spec.kind), tries);
}

}  // namespace

std::string_view InitialKindName(InitialKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

std::optional<InitialKind> ParseInitialKind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

void InitialSpec::Validate(const ModelParams& params) const {
  const auto bad = [](const std::string& what) {
    Fail(ErrorKind::kInvalidConfiguration, what);
  };
  const std::size_t n = params.n;
  switch (kind) {
    case InitialKind::kUniform: break;
    case InitialKind::kA:
      if (params.m != n) bad("A_k initial states require m = n");
      if (k < 1 || k > n - 1) bad("A_k requires 1 <= k <= n-1");
      break;
    case InitialKind::kB:
      if (params.m != n) bad("B_kl initial states require m = n");
      if (n < 3 || k < 1 || k > n - 2) bad("B_kl requires 1 <= k <= n-2");
      if (l < 1 || l > n - k) bad("B_kl requires 1 <= l <= n-k");
      break;
    case InitialKind::kC1:
    case InitialKind::kC2:
      if (params.m != n) bad("C1/C2 initial states require m = n");
      break;
    case InitialKind::kIstar1:
    case InitialKind::kIstar2:
    case InitialKind::kIstar3:
      if (params.eta >= 1.0) bad("Istar sets need eta < 1");
      break;
    case InitialKind::kEK0: ValidateEK0(params, big_k, beta); break;
    case InitialKind::kTheorem4Gamma:
      ValidateTheorem4(params, pivot_rank);
      if (k > pivot_rank) bad("gamma tube index must satisfy k <= s");
      break;
    case InitialKind::kExplicit:
      if (values.size() != n) {
        bad("explicit state has " + std::to_string(values.size()) + " entries, n=" +
            std::to_string(n));
      }
      for (double v : values) {
        if (!std::isfinite(v)) bad("explicit state has a non-finite entry");
      }
      break;
  }
}

OpinionVector SampleUniform(std::size_t n, RandomStream& stream) {
  OpinionVector x{std::vector<double>(n), 0};
  for (double& v : x.values) v = stream.Uniform01();
  return x;
}

OpinionVector SampleInitial(const InitialSpec& spec, const ModelParams& params,
                            RandomStream& stream) {
  spec.Validate(params);
  const std::size_t n = params.n;
  const double eta = params.eta;
  switch (spec.kind) {
    case InitialKind::kUniform: return SampleUniform(n, stream);
    case InitialKind::kA:
    case InitialKind::kB:
    case InitialKind::kC1:
    case InitialKind::kC2: return RejectRegion(spec, params, stream);
    case InitialKind::kIstar1: {
      // Range strictly below eta.
      const double width = eta * stream.Uniform01();
      const double base = stream.Uniform(0.0, 1.0 - width);
      OpinionVector x{std::vector<double>(n), 0};
      for (double& v : x.values) v = base + width * stream.Uniform01();
      return x;
    }
    case InitialKind::kIstar2: {
      const double band = std::pow(eta, static_cast<double>(n));
      OpinionVector x{std::vector<double>(n), 0};
      x.values[0] = 0.0;
      for (std::size_t i = 1; i < n; ++i) x.values[i] = 1.0 - band * stream.Uniform01();
      return x;
    }
    case InitialKind::kIstar3: {
      const std::uint64_t tries = CheckedTries(spec.max_tries);
      for (std::uint64_t attempt = 0; attempt < tries; ++attempt) {
        OpinionVector x{std::vector<double>(n), 0};
        for (std::size_t i = 0; i < n; ++i) {
          x.values[i] = i < n / 2 ? eta * stream.Uniform01() : 1.0 - eta * stream.Uniform01();
        }
        if (MembershipIstar(x.values, params, 3)) return x;
      }
      SamplingFailure("Istar3", tries);
    }
    case InitialKind::kEK0: return SampleEK0(params, spec.big_k, spec.beta, stream);
    case InitialKind::kTheorem4Gamma:
      return SampleTheorem4Initial(params, spec.pivot_rank, spec.k, stream, spec.max_tries)
          .state;
    case InitialKind::kExplicit: return OpinionVector{spec.values, 0};
  }
  Fail(ErrorKind::kInvalidConfiguration, "unknown initial kind");
}

std::string RegionLabel::ToString() const {
  switch (kind) {
    case RegionKind::kA: return "A_" + std::to_string(k);
    case RegionKind::kB: return "B_" + std::to_string(k) + "," + std::to_string(l);
    case RegionKind::kC1: return "C1";
    case RegionKind::kC2: return "C2";
    case RegionKind::kUnclassified: return "unclassified";
  }
  return "unclassified";
}

RegionLabel ClassifyRegion(std::span<const double> x0, const ModelParams& params) {
  const std::size_t n = x0.size();
  Require(params.m == params.n && n == params.n, ErrorKind::kPreconditionViolation,
          "region classification requires m = n and a state of n entries");
  const double mean = Mean(x0);
  const double eta = params.eta;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(x0[i] - mean);

  RegionLabel label;
  label.ordering.resize(n);
  std::iota(label.ordering.begin(), label.ordering.end(), std::size_t{0});
  std::stable_sort(label.ordering.begin(), label.ordering.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  std::size_t inside = 0;
  double inside_sum = 0.0;
  while (inside < n && dist[label.ordering[inside]] <= eta) {
    inside_sum += dist[label.ordering[inside]];
    ++inside;
  }
  if (inside == 0) {
    label.kind = RegionKind::kC1;
    return label;
  }
  if (inside == n) {
    label.kind = RegionKind::kC2;
    return label;
  }
  const double threshold = eta + inside_sum / static_cast<double>(n - inside);
  std::size_t near = 0;
  while (inside + near < n && dist[label.ordering[inside + near]] < threshold) ++near;

  label.k = inside;
  if (near == 0) {
    label.kind = RegionKind::kA;
  } else if (inside <= n - 2) {
    label.kind = RegionKind::kB;
    label.l = near;
  } else {
    label.kind = RegionKind::kUnclassified;
    label.l = near;
  }
  return label;
}

OpinionVector ApplyOrdering(std::span<const double> x0, std::span<const std::size_t> ordering) {
  Require(ordering.size() == x0.size(), ErrorKind::kInvalidArgument, "ordering size mismatch");
  OpinionVector out{std::vector<double>(x0.size()), 0};
  for (std::size_t i = 0; i < x0.size(); ++i) out.values[i] = x0[ordering[i]];
  return out;
}

bool MembershipIstar(std::span<const double> x0, const ModelParams& params, int which) {
  const std::size_t n = x0.size();
  if (n == 0) return false;
  const std::vector<double> v = Sorted(x0);
  const double eta = params.eta;
  switch (which) {
    case 1: return v.back() - v.front() < eta;
    case 2: {
      if (v.front() != 0.0) return false;
      const double floor_value = 1.0 - std::pow(eta, static_cast<double>(n));
      return std::all_of(v.begin() + 1, v.end(),
                         [&](double a) { return a > floor_value && a <= 1.0; });
    }
    case 3: {
      for (std::size_t i = 1; i < n; ++i) {
        if (v[i] == v[i - 1]) return false;
      }
      const std::size_t half = n / 2;
      for (std::size_t i = 0; i < n; ++i) {
        const bool ok = i < half ? (v[i] >= 0.0 && v[i] < eta) : (v[i] > 1.0 - eta && v[i] <= 1.0);
        if (!ok) return false;
      }
      return true;
    }
    default:
      Fail(ErrorKind::kInvalidArgument, "Istar set index must be 1, 2 or 3");
  }
}

void ValidateEK0(const ModelParams& params, std::size_t big_k, double beta) {
  params.Validate();
  const std::size_t n = params.n;
  const std::size_t m = params.m;
  const auto bad = [](const std::string& what) {
    Fail(ErrorKind::kInvalidConfiguration, "E_K0: " + what);
  };
  if (2 * m < n + 3) bad("requires m >= (n+3)/2");
  if (3 * m > 2 * n) bad("requires m <= 2n/3");
  if (big_k + m < n + 2) bad("requires K >= n-m+2");
  if (big_k + 1 > m) bad("requires K <= m-1");
  if (!(beta > 0.0)) bad("requires beta > 0");
  if (!(beta < params.eta)) bad("requires beta < eta");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double eta_cap = 1.0 / (6.0 + 4.0 * nd / (md * (nd - 1.0)));
  if (!(params.eta < eta_cap)) bad("requires eta < 1/(6 + 4n/(m(n-1)))");
}

bool MembershipEK0(std::span<const double> x0, std::size_t big_k, double beta) {
  if (big_k < 1 || big_k > x0.size()) return false;
  for (std::size_t i = 0; i + 1 < big_k; ++i) {
    if (x0[i] != 0.0) return false;
  }
  const double mid = x0[big_k - 1];
  if (!(mid > 0.5 - beta && mid < 0.5 + beta)) return false;
  for (std::size_t i = big_k; i < x0.size(); ++i) {
    if (x0[i] != 1.0) return false;
  }
  return true;
}

OpinionVector SampleEK0(const ModelParams& params, std::size_t big_k, double beta,
                        RandomStream& stream) {
  ValidateEK0(params, big_k, beta);
  OpinionVector x{std::vector<double>(params.n, 0.0), 0};
  for (std::size_t i = big_k; i < params.n; ++i) x.values[i] = 1.0;
  double mid = 0.5 - beta;
  while (!(mid > 0.5 - beta && mid < 0.5 + beta)) mid = stream.Uniform(0.5 - beta, 0.5 + beta);
  x.values[big_k - 1] = mid;
  return x;
}

GammaIntervals ComputeGammaIntervals(std::span<const double> x0, std::size_t s, std::size_t k,
                                     std::size_t m) {
  const std::size_t n = x0.size();
  Require(m >= 2 && m <= n, ErrorKind::kInvalidArgument, "need 2 <= m <= n");
  Require(s + m >= n + 1 && s + 1 <= m && s >= 2, ErrorKind::kInvalidArgument,
          "pivot rank outside [max(2, n-m+1), m-1]");
  Require(k >= 1 && k <= s, ErrorKind::kInvalidArgument, "tube index must satisfy 1 <= k <= s");
  const std::vector<double> v = Sorted(x0);
  for (std::size_t i = 1; i < n; ++i) {
    Require(v[i - 1] < v[i], ErrorKind::kInvalidArgument, "opinions must be pairwise distinct");
  }
  const auto at = [&](std::size_t rank) { return v[rank - 1]; };
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  GammaIntervals g;
  g.lower1 = ((kd - 1.0) * at(1) + at(s) + (md - kd) * at(s + 1)) / md;
  g.upper1 = ((kd - 1.0) * at(s - 1) + at(s) + (md - kd) * at(n)) / md;
  g.lower0 = (kd * at(1) + (md - kd) * at(s + 1)) / md;
  g.upper0 = (kd * at(s - 1) + (md - kd) * at(n)) / md;
  return g;
}

std::array<double, 5> TransformedTube(std::span<const double> x0, std::size_t s) {
  const std::size_t n = x0.size();
  Require(s >= 2 && s + 1 <= n, ErrorKind::kInvalidArgument, "pivot rank needs 2 <= s <= n-1");
  const std::vector<double> v = Sorted(x0);
  const auto at = [&](std::size_t rank) { return v[rank - 1]; };
  return {at(1), at(s - 1) - at(1), at(s) - at(s - 1), at(s + 1) - at(s), at(n) - at(s + 1)};
}

B1B2Membership MembershipB1B2(std::span<const double, 5> y, const ModelParams& params,
                              std::size_t k) {
  for (std::size_t i = 1; i < 5; ++i) {
    Require(y[i] >= 0.0, ErrorKind::kInvalidArgument, "gap entries of y must be non-negative");
  }
  Require(k >= 1 && k <= params.m, ErrorKind::kInvalidArgument, "need 1 <= k <= m");
  const double m = static_cast<double>(params.m);
  const double kd = static_cast<double>(k);
  const double eta = params.eta;
  const double y2 = y[1], y3 = y[2], y4 = y[3], y5 = y[4];
  const double spread = std::max(y2, y5);
  const bool common = spread < m * eta &&
                      std::min(y3, y4) > (m * m - m + 1.0) / (m - 1.0) * spread + m * eta;
  B1B2Membership b;
  b.b1 = common && (m - kd) / m * y4 < (kd - 1.0) / m * (y2 + y3) &&
         (kd - 1.0) / m * y3 < (m - kd) / m * (y4 + y5);
  b.b2 = common && (m - kd) / m * y4 < kd / m * (y2 + y3) &&
         kd / m * y3 < (m - kd) / m * (y4 + y5);
  return b;
}

Lemma2Report VerifyLemma2Conditions(std::span<const double> x0, const ModelParams& params,
                                    std::size_t s) {
  const ClusterAnalysis a = ComputeQuotientPartition(x0, s, params.m);
  const double m = static_cast<double>(params.m);
  Lemma2Report r;
  r.alpha_s = a.alpha_s;
  r.beta_s = a.beta_s;
  const double pivot = a.order.AtRank(s);
  for (std::size_t j = 0; j < a.classes.size(); ++j) {
    if (pivot >= a.classes[j].lower && pivot <= a.classes[j].upper) {
      r.pivot_in_class = true;
      r.class_index = j;
      break;
    }
  }
  r.beta_exceeds_three_alpha = a.beta_s > 3.0 * a.alpha_s;
  r.eta_above_alpha_over_m = a.alpha_s / m < params.eta;
  r.eta_below_upper = params.eta <= a.beta_s / m - a.alpha_s / (m - 1.0);
  return r;
}

void ValidateTheorem4(const ModelParams& params, std::size_t s) {
  params.Validate();
  const std::size_t n = params.n;
  const std::size_t m = params.m;
  const auto bad = [](const std::string& what) {
    Fail(ErrorKind::kInvalidConfiguration, "fluctuation regime: " + what);
  };
  if (m < 4) bad("requires m >= 4");
  if (n + 1 >= 2 * m) bad("requires n < 2m-1");
  const double md = static_cast<double>(m);
  if (!(params.eta < 1.0 / (2.0 * md + 2.0 * md * md * md / (md - 1.0)))) {
    bad("requires eta < 1/(2m + 2m^3/(m-1))");
  }
  if (s + m < n + 1 || s + 1 > m || s < 2 || s + 1 > n) {
    bad("pivot rank s must lie in [n-m+1, m-1]");
  }
}

Theorem4Sample SampleTheorem4Initial(const ModelParams& params, std::size_t s, std::size_t k,
                                     RandomStream& stream, std::uint64_t max_tries) {
  ValidateTheorem4(params, s);
  Require(k <= s, ErrorKind::kInvalidConfiguration, "gamma tube index must satisfy k <= s");
  const std::size_t n = params.n;
  const std::size_t m = params.m;
  const double md = static_cast<double>(m);
  const double eta = params.eta;
  const std::uint64_t tries = CheckedTries(max_tries);
  std::vector<double> v(n);
  for (std::uint64_t attempt = 1; attempt <= tries; ++attempt) {
    for (double& a : v) a = stream.Uniform01();
    std::sort(v.begin(), v.end());
    const auto at = [&](std::size_t rank) { return v[rank - 1]; };
    const double alpha = std::max(at(s - 1) - at(1), at(n) - at(s + 1));
    const double beta = std::min(at(s) - at(s - 1), at(s + 1) - at(s));
    if (!(alpha / md < eta &&
          eta < (beta - (md - 1.0) * alpha) / md - alpha / (md - 1.0))) {
      continue;
    }
    bool found = false;
    Theorem4Sample sample;
    const std::size_t k_lo = k == 0 ? 1 : k;
    const std::size_t k_hi = k == 0 ? s : k;
    const double xs = at(s);
    for (std::size_t kk = k_lo; kk <= k_hi && !found; ++kk) {
      const GammaIntervals g = ComputeGammaIntervals(v, s, kk, m);
      // Tube (kk-1, 1, m-kk) needs m-kk <= n-s; tube (kk, 0, m-kk) also kk <= s-1.
      const bool tube1_ok = m - kk <= n - s;
      const bool tube0_ok = tube1_ok && kk + 1 <= s;
      if (tube1_ok && xs >= g.lower1 && xs <= g.upper1) {
        found = true;
        sample.k = kk;
        sample.pivot_tube = true;
      } else if (tube0_ok && xs >= g.lower0 && xs <= g.upper0) {
        found = true;
        sample.k = kk;
        sample.pivot_tube = false;
      }
    }
    if (!found) continue;
    if (!VerifyLemma2Conditions(v, params, s).all()) continue;
    sample.state = OpinionVector{v, 0};
    sample.tries = attempt;
    return sample;
  }
  SamplingFailure("fluctuation-regime sampler (acceptance rate < 1/" + std::to_string(tries) +
                      ")",
                  tries);
}

}  // namespace cliquedyn
