#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cliquedyn/model.h"

namespace cliquedyn {

// Ascending order statistics of a state. `permutation[r]` is the node index
// holding the (r+1)-th smallest value; ties are broken by node index.
struct OrderedStats {
  std::vector<double> sorted_values;
  std::vector<std::size_t> permutation;

  std::size_t size() const noexcept { return sorted_values.size(); }
  // Value at 1-based rank.
  double AtRank(std::size_t rank) const;
  // D_[i,j] = x_[j] - x_[i] for 1-based ranks i <= j.
  double Range(std::size_t i, std::size_t j) const;
};

OrderedStats ComputeOrderedStats(std::span<const double> x);

inline double RangeD(const OrderedStats& stats, std::size_t i, std::size_t j) {
  return stats.Range(i, j);
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// C(n, k), or UINT64_MAX when it does not fit.
std::uint64_t Binomial(std::uint64_t n, std::uint64_t k) noexcept;

// Calls visit(span of k ascending indices) for every k-subset of {0..n-1} in
// lexicographic order.
template <typename Visit>
void ForEachCombination(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    visit(std::span<const std::size_t>(c));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

// All C(n, m) clique averages in ascending order, each with the subset of
// node indices producing it. Ties keep lexicographic subset order.
struct CliqueAverageStats {
  std::size_t m = 0;
  std::vector<double> sorted_averages;
  std::vector<std::vector<std::size_t>> subset_of;
};

CliqueAverageStats ComputeCliqueAverageStats(std::span<const double> x, std::size_t m,
                                             std::uint64_t cap = kDefaultEnumerationCap);

// Counts of clique members below, at, and above the pivot rank s.
struct SelectionTube {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::size_t k3 = 0;

  auto operator<=>(const SelectionTube&) const = default;
};

// `ranks` are 1-based sorted positions of the clique members.
SelectionTube ComputeSelectionTube(std::span<const std::size_t> ranks, std::size_t pivot_rank);

// One equivalence class of clique averages sharing a selection tube.
struct QuotientClass {
  SelectionTube tube;
  std::vector<std::size_t> members;  // positions in the sorted average list
  double lower = 0.0;                // smallest average in the class
  double upper = 0.0;                // largest average in the class
  double diameter = 0.0;             // R_l
  double gap_to_others = 0.0;        // C_l; +inf when there is a single class
  double max_adjacent_gap = 0.0;     // over consecutive members (class order)
  double min_adjacent_gap = 0.0;
};

// Decomposition of the clique averages around a pivot. Classes are ordered by
// their smallest average.
struct ClusterAnalysis {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t pivot_rank = 0;
  OrderedStats order;
  CliqueAverageStats averages;
  std::vector<QuotientClass> classes;
  // min{s, n-s+1, m+1} + min{s, n-s+1, m}: an upper bound on the number of
  // realizable tubes.
  std::size_t k_s_bound = 0;
  double alpha_s = 0.0;  // max{D_[1,s-1], D_[s+1,n]}
  double beta_s = 0.0;   // min{D_[s-1,s], D_[s,s+1]}

  std::size_t realized_class_count() const noexcept { return classes.size(); }
};

std::size_t KsBound(std::size_t n, std::size_t m, std::size_t pivot_rank) noexcept;
// Exact number of distinct tubes when n-m+1 <= s <= m-1: 2(n-m)+1.
std::size_t RealizableTubeCount(std::size_t n, std::size_t m, std::size_t pivot_rank) noexcept;

// Requires m >= 2, n-m+1 <= s <= m-1, 2 <= s <= n-1 and pairwise distinct
// values. Classes are built from realized tubes.
ClusterAnalysis ComputeQuotientPartition(std::span<const double> x0, std::size_t pivot_rank,
                                         std::size_t m,
                                         std::uint64_t cap = kDefaultEnumerationCap);

struct InequalityCheck {
  std::string name;
  std::size_t class_index = 0;  // 0-based class position
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  bool lower_ok = true;
  bool upper_ok = true;
  bool ok() const noexcept { return lower_ok && upper_ok; }
};

// Per-inequality tallies of the quotient-set bounds.
struct Lemma1Report {
  bool precondition_met = false;  // alpha_s > 0
  std::vector<InequalityCheck> checks;
  // Counts of failures per bound side.
  std::size_t gap_lower_failures = 0;       // beta_s/m <= C_l
  std::size_t gap_upper_failures = 0;       // C_l <= max{D_[s-1,s],D_[s,s+1]}/m
  std::size_t diameter_lower_failures = 0;  // min{D_[1,s-1],D_[s+1,n]}/m <= R_l
  std::size_t diameter_upper_failures = 0;  // R_l <= alpha_s
  std::size_t adjacent_lower_failures = 0;  // min_i D_[i,i+1]/m <= max adjacent gap
  std::size_t adjacent_upper_failures = 0;  // max adjacent gap <= alpha_s/m

  bool all_hold() const noexcept {
    return precondition_met && gap_lower_failures == 0 && gap_upper_failures == 0 &&
           diameter_lower_failures == 0 && diameter_upper_failures == 0 &&
           adjacent_lower_failures == 0 && adjacent_upper_failures == 0;
  }
};

Lemma1Report VerifyLemma1Bounds(const ClusterAnalysis& analysis, double slack = 1e-12);

// Long-run value of the rank-k node when m = n and only that node starts
// inside the confidence band below the mean: mean(x0) + Delta_k / (n-1).
// Throws kPreconditionViolation naming the failed hypothesis.
double Theorem3Limit(std::span<const double> x0, std::size_t rank_k, double eta);

// First time the second node enters the confidence band of the mean (m = n),
// for a state whose node 0 sits inside the band below the mean and node 1
// just outside above it. Throws kPreconditionViolation otherwise.
std::uint64_t TStar(std::span<const double> x0, const ModelParams& params);

// Joint density of the order statistics (x_[i_1], ..., x_[i_k]) of n i.i.d.
// U[0,1] samples at `point`. `ranks` are 1-based and strictly increasing.
double OrderStatDensity(std::span<const std::size_t> ranks, std::span<const double> point,
                        std::size_t n);

}  // namespace cliquedyn
