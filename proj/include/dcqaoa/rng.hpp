#pragma once

#include <cstdint>
#include <string_view>

namespace dcqaoa {

/// SplitMix64. Output is fixed across platforms and compilers, unlike the
/// <random> distributions, so every generated instance is reproducible
/// bit-for-bit from its seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int rademacher() { return (next() >> 63) ? 1 : -1; }

 private:
  std::uint64_t state_;
};

/// Child seed for an independent stream, keyed by a tag and an index.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index = 0) {
  // FNV-1a over the tag, then two splitmix rounds to decorrelate.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  SplitMix64 mix(base ^ h);
  const std::uint64_t a = mix.next();
  SplitMix64 mix2(a ^ (index * 0xd1342543de82ef95ULL));
  return mix2.next();
}

}  // namespace dcqaoa
