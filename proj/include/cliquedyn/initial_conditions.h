#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliquedyn/model.h"
#include "cliquedyn/rng.h"

namespace cliquedyn {

enum class InitialKind {
  kUniform,
  kA,        // A_k: k nodes inside the band, the rest clearly outside
  kB,        // B_kl
  kC1,       // nobody inside the band: frozen
  kC2,       // everybody inside the band: plain averaging
  kIstar1,   // range below eta
  kIstar2,   // one node at 0, the rest within eta^n of 1
  kIstar3,   // two well separated halves, pairwise distinct
  kEK0,      // K-1 zeros, one value near 1/2, n-K ones
  kTheorem4Gamma,
  kExplicit,
};

std::string_view InitialKindName(InitialKind kind);
std::optional<InitialKind> ParseInitialKind(std::string_view name);

struct InitialSpec {
  InitialKind kind = InitialKind::kUniform;
  std::size_t k = 1;           // A_k / B_kl index; gamma tube index (0 = any)
  std::size_t l = 1;           // B_kl
  std::size_t big_k = 0;       // E_K0 rank K (1-based)
  double beta = 0.1;           // E_K0 half-width
  std::size_t pivot_rank = 0;  // Theorem-4 pivot s (1-based)
  std::vector<double> values;  // explicit state
  std::uint64_t max_tries = 1'000'000;

  bool operator==(const InitialSpec&) const = default;

  // Throws kInvalidConfiguration when the kind's parameters do not fit.
  void Validate(const ModelParams& params) const;
};

// n i.i.d. U[0,1) opinions.
OpinionVector SampleUniform(std::size_t n, RandomStream& stream);

// Draws an initial state for one trial. Rejection-based kinds throw
// kSamplingFailure after spec.max_tries attempts.
OpinionVector SampleInitial(const InitialSpec& spec, const ModelParams& params,
                            RandomStream& stream);

// ---------------------------------------------------------------------------
// m = n partition of initial states.

enum class RegionKind { kA, kB, kC1, kC2, kUnclassified };

struct RegionLabel {
  RegionKind kind = RegionKind::kUnclassified;
  std::size_t k = 0;
  std::size_t l = 0;
  // Node indices by ascending distance to the mean; the labels A_k/B_kl refer
  // to positions in this ordering.
  std::vector<std::size_t> ordering;

  std::string ToString() const;
};

// Requires m = n.
RegionLabel ClassifyRegion(std::span<const double> x0, const ModelParams& params);

// Relabels so that node i receives x0[ordering[i]].
OpinionVector ApplyOrdering(std::span<const double> x0, std::span<const std::size_t> ordering);

// which in {1, 2, 3}; evaluated on the sorted state.
bool MembershipIstar(std::span<const double> x0, const ModelParams& params, int which);

// ---------------------------------------------------------------------------
// Constructed fluctuation event.

void ValidateEK0(const ModelParams& params, std::size_t big_k, double beta);
bool MembershipEK0(std::span<const double> x0, std::size_t big_k, double beta);
OpinionVector SampleEK0(const ModelParams& params, std::size_t big_k, double beta,
                        RandomStream& stream);

// ---------------------------------------------------------------------------
// Positive-probability fluctuation regime around a pivot rank s.

struct GammaIntervals {
  double lower1 = 0.0;  // tube (k-1, 1, m-k)
  double upper1 = 0.0;
  double lower0 = 0.0;  // tube (k, 0, m-k)
  double upper0 = 0.0;
};

// x0 need not be sorted but must be pairwise distinct.
GammaIntervals ComputeGammaIntervals(std::span<const double> x0, std::size_t pivot_rank,
                                     std::size_t k, std::size_t m);

// (x_[1], D_[1,s-1], D_[s-1,s], D_[s,s+1], D_[s+1,n]).
std::array<double, 5> TransformedTube(std::span<const double> x0, std::size_t pivot_rank);

struct B1B2Membership {
  bool b1 = false;
  bool b2 = false;
};

B1B2Membership MembershipB1B2(std::span<const double, 5> y, const ModelParams& params,
                              std::size_t k);

struct Lemma2Report {
  double alpha_s = 0.0;
  double beta_s = 0.0;
  bool pivot_in_class = false;  // x_s inside [lower, upper] of some class
  std::size_t class_index = 0;
  bool beta_exceeds_three_alpha = false;
  bool eta_above_alpha_over_m = false;
  bool eta_below_upper = false;  // eta <= beta/m - alpha/(m-1)

  bool all() const noexcept {
    return pivot_in_class && beta_exceeds_three_alpha && eta_above_alpha_over_m &&
           eta_below_upper;
  }
};

Lemma2Report VerifyLemma2Conditions(std::span<const double> x0, const ModelParams& params,
                                    std::size_t pivot_rank);

void ValidateTheorem4(const ModelParams& params, std::size_t pivot_rank);

struct Theorem4Sample {
  OpinionVector state;  // sorted: node i holds the (i+1)-th smallest value
  std::size_t k = 0;
  bool pivot_tube = false;  // true: gamma_1 interval fired, false: gamma_0
  std::uint64_t tries = 0;
};

// Rejection-samples sorted A2 states until x_s lies in a gamma interval, the
// eta window alpha_s/m < eta < (beta_s-(m-1)alpha_s)/m - alpha_s/(m-1) holds
// and the quotient-set conditions are met. k = 0 accepts any tube index.
Theorem4Sample SampleTheorem4Initial(const ModelParams& params, std::size_t pivot_rank,
                                     std::size_t k, RandomStream& stream,
                                     std::uint64_t max_tries);

}  // namespace cliquedyn
