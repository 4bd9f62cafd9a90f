#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cliquedyn {

// Indexing convention used across the library: a node *index* is 0-based;
// a *rank* is the 1-based position of a value in ascending order.

enum class CliquePolicy {
  kUniformAllSubsets,     // each node draws uniformly from all m-subsets of V
  kUniformExcludingSelf,  // uniformly from the m-subsets of V \ {i}
};

std::string_view CliquePolicyName(CliquePolicy policy);
std::optional<CliquePolicy> ParseCliquePolicy(std::string_view name);

struct ModelParams {
  std::size_t n = 2;
  std::size_t m = 2;
  double delta = 0.5;  // mixing weight of the clique average
  double eta = 0.1;    // confidence level
  CliquePolicy clique_policy = CliquePolicy::kUniformAllSubsets;
  double boundary_epsilon = 0.0;  // slack added to eta in the confidence test

  // Throws Error(kInvalidConfiguration) naming the first violated constraint.
  void Validate() const;

  bool operator==(const ModelParams&) const = default;
};

struct OpinionVector {
  std::vector<double> values;
  std::uint64_t time = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const OpinionVector&) const = default;
};

// The neighbor sets N_i(t) of one time step, stored flat (n rows of m
// indices). Each row is kept in ascending order.
class CliqueDraw {
 public:
  CliqueDraw() = default;
  CliqueDraw(std::size_t n, std::size_t m, std::uint64_t time);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t clique_size() const noexcept { return m_; }
  std::uint64_t time() const noexcept { return time_; }
  void set_time(std::uint64_t t) noexcept { time_ = t; }

  std::span<const std::size_t> Set(std::size_t node) const {
    return {flat_.data() + node * m_, m_};
  }
  std::span<std::size_t> MutableSet(std::size_t node) {
    return {flat_.data() + node * m_, m_};
  }

  bool operator==(const CliqueDraw&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::uint64_t time_ = 0;
  std::vector<std::size_t> flat_;
};

}  // namespace cliquedyn
