#include "cliquedyn/rng.h"

namespace cliquedyn {

std::uint64_t RandomStream::Below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace cliquedyn
