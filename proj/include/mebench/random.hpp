#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>

namespace mebench {

// Anything that yields uniform doubles in [0, 1). All higher-level draws
// (indices, lattice points, signs) are derived from unit() so that tests can
// script the exact sequence of decisions an algorithm makes.
template <class R>
concept UnitRandom = requires(R& r) {
  { r.unit() } -> std::convertible_to<double>;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the substream owned by one (frame, block row, block column) unit
// of work. Independent of the order in which blocks are processed.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t frame,
                                              std::uint64_t row, std::uint64_t col) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ frame);
  h = splitmix64(h ^ row);
  return splitmix64(h ^ col);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53-bit resolution, independent of the standard library's distributions.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Uniform index in [0, n).
template <UnitRandom R>
std::size_t draw_index(R& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(rng.unit() * static_cast<double>(n));
  return std::min(i, n - 1);
}

// Uniform integer in [lo, hi].
template <UnitRandom R>
int draw_int(R& rng, int lo, int hi) {
  return lo + static_cast<int>(draw_index(rng, static_cast<std::size_t>(hi - lo) + 1));
}

}  // namespace mebench
