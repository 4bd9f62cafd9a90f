#include "cliquedyn/order_analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "cliquedyn/error.h"

namespace cliquedyn {

double OrderedStats::AtRank(std::size_t rank) const {
  Require(rank >= 1 && rank <= size(), ErrorKind::kInvalidArgument,
          "rank " + std::to_string(rank) + " out of range");
  return sorted_values[rank - 1];
}

double OrderedStats::Range(std::size_t i, std::size_t j) const {
  Require(i >= 1 && i <= j && j <= size(), ErrorKind::kInvalidArgument,
          "range ranks must satisfy 1 <= i <= j <= n");
  return sorted_values[j - 1] - sorted_values[i - 1];
}

OrderedStats ComputeOrderedStats(std::span<const double> x) {
  OrderedStats stats;
  stats.permutation.resize(x.size());
  std::iota(stats.permutation.begin(), stats.permutation.end(), std::size_t{0});
  std::stable_sort(stats.permutation.begin(), stats.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  stats.sorted_values.reserve(x.size());
  for (std::size_t idx : stats.permutation) stats.sorted_values.push_back(x[idx]);
  return stats;
}

std::uint64_t Binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

CliqueAverageStats ComputeCliqueAverageStats(std::span<const double> x, std::size_t m,
                                             std::uint64_t cap) {
  Require(m >= 1 && m <= x.size(), ErrorKind::kInvalidArgument,
          "clique size must satisfy 1 <= m <= n");
  const std::uint64_t z = Binomial(x.size(), m);
  if (z > cap) {
    Fail(ErrorKind::kCapacityExceeded, "C(" + std::to_string(x.size()) + "," +
                                           std::to_string(m) + ") exceeds enumeration cap " +
                                           std::to_string(cap));
  }
  std::vector<double> averages;
  std::vector<std::vector<std::size_t>> subsets;
  averages.reserve(z);
  subsets.reserve(z);
  const double inv = static_cast<double>(m);
  ForEachCombination(x.size(), m, [&](std::span<const std::size_t> c) {
    double sum = 0.0;
    for (std::size_t j : c) sum += x[j];
    averages.push_back(sum / inv);
    subsets.emplace_back(c.begin(), c.end());
  });
  std::vector<std::size_t> order(averages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return averages[a] < averages[b]; });

  CliqueAverageStats stats;
  stats.m = m;
  stats.sorted_averages.reserve(order.size());
  stats.subset_of.reserve(order.size());
  for (std::size_t k : order) {
    stats.sorted_averages.push_back(averages[k]);
    stats.subset_of.push_back(std::move(subsets[k]));
  }
  return stats;
}

SelectionTube ComputeSelectionTube(std::span<const std::size_t> ranks, std::size_t pivot_rank) {
  SelectionTube tube;
  for (std::size_t r : ranks) {
    if (r < pivot_rank) {
      ++tube.k1;
    } else if (r == pivot_rank) {
      ++tube.k2;
    } else {
      ++tube.k3;
    }
  }
  return tube;
}

std::size_t KsBound(std::size_t n, std::size_t m, std::size_t s) noexcept {
  const std::size_t a = std::min({s, n - s + 1, m + 1});
  const std::size_t b = std::min({s, n - s + 1, m});
  return a + b;
}

std::size_t RealizableTubeCount(std::size_t n, std::size_t m, std::size_t s) noexcept {
  // k2 = 0: k1 ranges over [m-n+s, s-1]; k2 = 1: over [m-1-n+s, s-1].
  std::size_t count = 0;
  for (std::size_t k2 = 0; k2 <= 1; ++k2) {
    for (std::size_t k1 = 0; k1 <= s - 1 && k1 + k2 <= m; ++k1) {
      const std::size_t k3 = m - k1 - k2;
      if (k3 <= n - s) ++count;
    }
  }
  return count;
}

ClusterAnalysis ComputeQuotientPartition(std::span<const double> x0, std::size_t s,
                                         std::size_t m, std::uint64_t cap) {
  const std::size_t n = x0.size();
  Require(m >= 2 && m <= n, ErrorKind::kInvalidArgument, "quotient partition needs 2 <= m <= n");
  Require(s + m >= n + 1 && s + 1 <= m, ErrorKind::kInvalidArgument,
          "pivot rank s=" + std::to_string(s) + " outside [n-m+1, m-1] = [" +
              std::to_string(n + 1 - m) + ", " + std::to_string(m - 1) + "]");
  Require(s >= 2 && s + 1 <= n, ErrorKind::kInvalidArgument,
          "pivot rank needs neighbours on both sides (2 <= s <= n-1)");

  ClusterAnalysis a;
  a.n = n;
  a.m = m;
  a.pivot_rank = s;
  a.order = ComputeOrderedStats(x0);
  for (std::size_t r = 1; r < n; ++r) {
    if (!(a.order.sorted_values[r - 1] < a.order.sorted_values[r])) {
      Fail(ErrorKind::kPreconditionViolation,
           "group partition requires pairwise distinct opinions");
    }
  }
  // Averages over sorted values: subset_of then holds 0-based sorted positions.
  a.averages = ComputeCliqueAverageStats(a.order.sorted_values, m, cap);
  a.k_s_bound = KsBound(n, m, s);
  const OrderedStats& o = a.order;
  a.alpha_s = std::max(o.Range(1, s - 1), o.Range(s + 1, n));
  a.beta_s = std::min(o.Range(s - 1, s), o.Range(s, s + 1));

  std::map<SelectionTube, std::size_t> class_of;
  std::vector<std::size_t> label(a.averages.sorted_averages.size());
  std::vector<std::size_t> ranks(m);
  for (std::size_t p = 0; p < label.size(); ++p) {
    const auto& subset = a.averages.subset_of[p];
    for (std::size_t j = 0; j < m; ++j) ranks[j] = subset[j] + 1;
    const SelectionTube tube = ComputeSelectionTube(ranks, s);
    auto [it, inserted] = class_of.try_emplace(tube, a.classes.size());
    if (inserted) {
      QuotientClass c;
      c.tube = tube;
      a.classes.push_back(c);
    }
    label[p] = it->second;
    a.classes[it->second].members.push_back(p);
  }

  const auto& avg = a.averages.sorted_averages;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < a.classes.size(); ++c) {
    QuotientClass& q = a.classes[c];
    q.lower = avg[q.members.front()];
    q.upper = avg[q.members.back()];
    q.diameter = q.upper - q.lower;
    q.max_adjacent_gap = 0.0;
    q.min_adjacent_gap = q.members.size() > 1 ? inf : 0.0;
    for (std::size_t k = 1; k < q.members.size(); ++k) {
      const double g = avg[q.members[k]] - avg[q.members[k - 1]];
      q.max_adjacent_gap = std::max(q.max_adjacent_gap, g);
      q.min_adjacent_gap = std::min(q.min_adjacent_gap, g);
    }
    // Nearest non-member of any member: sweep both directions.
    double best = inf;
    double last_outside = -inf;
    for (std::size_t p = 0; p < avg.size(); ++p) {
      if (label[p] != c) {
        last_outside = avg[p];
      } else {
        best = std::min(best, avg[p] - last_outside);
      }
    }
    double next_outside = inf;
    for (std::size_t p = avg.size(); p-- > 0;) {
      if (label[p] != c) {
        next_outside = avg[p];
      } else {
        best = std::min(best, next_outside - avg[p]);
      }
    }
    q.gap_to_others = best;
  }

  // Re-label classes by ascending smallest average.
  std::vector<std::size_t> order(a.classes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a.classes[x].lower < a.classes[y].lower ||
           (a.classes[x].lower == a.classes[y].lower && a.classes[x].tube < a.classes[y].tube);
  });
  std::vector<QuotientClass> sorted_classes;
  sorted_classes.reserve(order.size());
  for (std::size_t k : order) sorted_classes.push_back(std::move(a.classes[k]));
  a.classes = std::move(sorted_classes);
  return a;
}

Lemma1Report VerifyLemma1Bounds(const ClusterAnalysis& a, double slack) {
  Lemma1Report report;
  report.precondition_met = a.alpha_s > 0.0;
  if (!report.precondition_met) return report;

  const OrderedStats& o = a.order;
  const std::size_t s = a.pivot_rank;
  const std::size_t n = a.n;
  const double m = static_cast<double>(a.m);
  double min_adjacent = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) min_adjacent = std::min(min_adjacent, o.Range(i, i + 1));
  const double c_lower = a.beta_s / m;
  const double c_upper = std::max(o.Range(s - 1, s), o.Range(s, s + 1)) / m;
  const double r_lower = std::min(o.Range(1, s - 1), o.Range(s + 1, n)) / m;
  const double r_upper = a.alpha_s;
  const double g_lower = min_adjacent / m;
  const double g_upper = a.alpha_s / m;

  const auto check = [&](std::string name, std::size_t cls, double lo, double v, double hi,
                         std::size_t& lower_failures, std::size_t& upper_failures) {
    InequalityCheck ic{std::move(name), cls, lo, v, hi, v >= lo - slack, v <= hi + slack};
    if (!ic.lower_ok) ++lower_failures;
    if (!ic.upper_ok) ++upper_failures;
    report.checks.push_back(std::move(ic));
  };

  for (std::size_t l = 0; l < a.classes.size(); ++l) {
    const QuotientClass& q = a.classes[l];
    if (std::isfinite(q.gap_to_others)) {
      check("gap_to_others", l, c_lower, q.gap_to_others, c_upper, report.gap_lower_failures,
            report.gap_upper_failures);
    }
    check("diameter", l, r_lower, q.diameter, r_upper, report.diameter_lower_failures,
          report.diameter_upper_failures);
    if (q.members.size() > 1) {
      check("max_adjacent_gap", l, g_lower, q.max_adjacent_gap, g_upper,
            report.adjacent_lower_failures, report.adjacent_upper_failures);
    }
  }
  return report;
}

double Theorem3Limit(std::span<const double> x0, std::size_t rank_k, double eta) {
  const std::size_t n = x0.size();
  Require(n >= 2, ErrorKind::kInvalidArgument, "need at least two nodes");
  const OrderedStats o = ComputeOrderedStats(x0);
  const double mean = std::accumulate(x0.begin(), x0.end(), 0.0) / static_cast<double>(n);
  const double delta_k = mean - o.AtRank(rank_k);
  std::ostringstream why;
  if (!(delta_k >= 0.0 && delta_k <= eta)) {
    why << "Delta_k = mean - x_[k] = " << delta_k << " is outside [0, eta]";
    Fail(ErrorKind::kPreconditionViolation, why.str());
  }
  const double margin = eta + delta_k / static_cast<double>(n - 1);
  for (std::size_t r = 1; r <= n; ++r) {
    if (r == rank_k) continue;
    const double d = std::abs(o.AtRank(r) - mean);
    if (!(d > margin)) {
      why << "|x_[" << r << "] - mean| = " << d << " is not > eta + Delta_k/(n-1) = "
          << margin;
      Fail(ErrorKind::kPreconditionViolation, why.str());
    }
  }
  return mean + delta_k / static_cast<double>(n - 1);
}

std::uint64_t TStar(std::span<const double> x0, const ModelParams& params) {
  params.Validate();
  const std::size_t n = x0.size();
  Require(params.m == params.n && n == params.n, ErrorKind::kPreconditionViolation,
          "t* requires m = n and a state of n entries");
  Require(n >= 3, ErrorKind::kPreconditionViolation, "t* requires n >= 3");
  const double eta = params.eta;
  const double mean = std::accumulate(x0.begin(), x0.end(), 0.0) / static_cast<double>(n);
  const double lead = mean - x0[0];
  const double span = lead / static_cast<double>(n - 1);
  std::ostringstream why;
  if (!(lead > 0.0 && lead <= eta)) {
    why << "need 0 < mean - x_1 <= eta, got " << lead;
    Fail(ErrorKind::kPreconditionViolation, why.str());
  }
  const double gap2 = x0[1] - mean;
  if (!(gap2 >= eta && gap2 < eta + span)) {
    why << "need eta <= x_2 - mean < eta + (mean - x_1)/(n-1), got " << gap2;
    Fail(ErrorKind::kPreconditionViolation, why.str());
  }
  for (std::size_t j = 2; j < n; ++j) {
    if (!(std::abs(x0[j] - mean) >= eta + span)) {
      why << "need |x_" << j + 1 << " - mean| >= eta + (mean - x_1)/(n-1)";
      Fail(ErrorKind::kPreconditionViolation, why.str());
    }
  }
  const double argument = 1.0 - static_cast<double>(n - 1) * (gap2 - eta) / lead;
  if (!(argument > 0.0 && argument <= 1.0)) {
    why << "logarithm argument " << argument << " outside (0, 1]";
    Fail(ErrorKind::kPreconditionViolation, why.str());
  }
  const double rate = 1.0 - params.delta + params.delta / static_cast<double>(n);
  const double t = std::ceil(std::log(argument) / std::log(rate));
  return t <= 0.0 ? 0 : static_cast<std::uint64_t>(t);
}

double OrderStatDensity(std::span<const std::size_t> ranks, std::span<const double> point,
                        std::size_t n) {
  const std::size_t k = ranks.size();
  Require(k >= 1 && point.size() == k, ErrorKind::kInvalidArgument,
          "ranks and point must have the same non-zero length");
  Require(ranks.front() >= 1 && ranks.back() <= n, ErrorKind::kInvalidArgument,
          "ranks must lie in [1, n]");
  for (std::size_t j = 1; j < k; ++j) {
    Require(ranks[j - 1] < ranks[j], ErrorKind::kInvalidArgument,
            "ranks must be strictly increasing");
  }
  if (point.front() < 0.0 || point.back() > 1.0) return 0.0;
  for (std::size_t j = 1; j < k; ++j) {
    if (point[j] < point[j - 1]) return 0.0;
  }
  // n! / ((i_1-1)! (n-i_k)! prod (i_{s+1}-i_s-1)!), in log space.
  double log_coeff = std::lgamma(static_cast<double>(n) + 1.0) -
                     std::lgamma(static_cast<double>(ranks.front())) -
                     std::lgamma(static_cast<double>(n - ranks.back()) + 1.0);
  double value = std::pow(point.front(), static_cast<double>(ranks.front() - 1)) *
                 std::pow(1.0 - point.back(), static_cast<double>(n - ranks.back()));
  for (std::size_t j = 1; j < k; ++j) {
    const auto gap = static_cast<double>(ranks[j] - ranks[j - 1] - 1);
    log_coeff -= std::lgamma(gap + 1.0);
    value *= std::pow(point[j] - point[j - 1], gap);
  }
  return std::exp(log_coeff) * value;
}

}  // namespace cliquedyn
