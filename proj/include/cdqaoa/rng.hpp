#pragma once

#include <cstdint>

namespace cdqaoa {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator. Word i of stream s under seed k is
///
///   splitmix64(key(k, s) + i * 0x9e3779b97f4a7c15),  key = splitmix64(k) ^ splitmix64(~s)
///
/// so any element can be recomputed from (seed, stream, index) alone and the
/// sequence is identical on every platform. Doubles take the top 53 bits.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(seed) ^ splitmix64(~stream)) {}

  constexpr std::uint64_t at(std::uint64_t index) const noexcept {
    return splitmix64(key_ + index * 0x9e3779b97f4a7c15ULL);
  }

  constexpr std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform on [0, 1).
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cdqaoa
