#pragma once

#include <cstdint>
#include <limits>

namespace cliquedyn {

// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t Mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A small sequential generator. The library never relies on the standard
// distributions, whose output is implementation-defined, so every draw is
// reproducible bit-for-bit across toolchains.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * Uniform01();
  }

  // Uniform on {0, ..., bound - 1}; Lemire's multiply-and-reject method.
  std::uint64_t Below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
};

// Stream families. Each draw site uses its own domain so that, for example,
// drawing an initial state never perturbs the clique draws of the same trial.
enum class StreamDomain : std::uint64_t {
  kCliques = 1,
  kInitialState = 2,
  kAuxiliary = 3,
};

// Counter-based derivation: the stream for (domain, trial, time, node) is a
// pure function of the master seed and those four counters.
struct RngSpec {
  std::uint64_t master_seed = 0;

  RandomStream Stream(StreamDomain domain, std::uint64_t trial,
                      std::uint64_t time = 0, std::uint64_t node = 0) const noexcept {
    std::uint64_t h = Mix64(master_seed ^ 0x6a09e667f3bcc909ULL);
    h = Mix64(h ^ static_cast<std::uint64_t>(domain));
    h = Mix64(h ^ trial);
    h = Mix64(h ^ time);
    h = Mix64(h ^ node);
    return RandomStream(h);
  }
};

}  // namespace cliquedyn
