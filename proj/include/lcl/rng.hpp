#pragma once

#include <cstdint>

namespace lcl {

// Counter-based random bits. Every draw is a pure function of
// (seed, stream, index, draw), so results never depend on call order or on
// how work is split across threads. The mixer is the SplitMix64 finalizer
// applied along the key.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent draw families. Values are part of the determinism contract.
enum class Stream : std::uint64_t {
  x0 = 1,
  pool = 2,
  leaves = 3,
  monotone = 4,
  condition2 = 5,
  lemma = 6,
  remark4 = 7,
  normal = 8,
};

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t index,
                                     std::uint64_t draw) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ draw);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by multiply-high (Lemire).
inline std::uint64_t to_below(std::uint64_t bits, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits) * n) >> 64);
}

/// A keyed view on counter_bits for one (seed, stream) pair.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}
  constexpr CounterRng(std::uint64_t seed, Stream stream) noexcept
      : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}

  constexpr std::uint64_t bits(std::uint64_t index,
                               std::uint64_t draw = 0) const noexcept {
    return counter_bits(seed_, stream_, index, draw);
  }
  constexpr double uniform(std::uint64_t index,
                           std::uint64_t draw = 0) const noexcept {
    return to_unit(bits(index, draw));
  }
  std::uint64_t below(std::uint64_t index, std::uint64_t draw,
                      std::uint64_t n) const noexcept {
    return to_below(bits(index, draw), n);
  }

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Key for generation `generation` of a pool run; recorded in pool lineage.
constexpr std::uint64_t generation_key(std::uint64_t master_seed,
                                       int generation) noexcept {
  return splitmix64(master_seed ^ splitmix64(
      static_cast<std::uint64_t>(generation) + 0x5151ULL));
}

}  // namespace lcl
