#pragma once

#include <array>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "mebench/frame.hpp"
#include "mebench/matching.hpp"

// Fixed-pattern fast block matching: Three-Step Search and Diamond Search.
namespace mebench::baselines {

enum class Kind { fsa, tss, ds, hsbm };

inline std::string_view to_string(Kind k) noexcept {
  switch (k) {
    case Kind::fsa: return "fsa";
    case Kind::tss: return "tss";
    case Kind::ds: return "ds";
    case Kind::hsbm: return "hsbm";
  }
  return "?";
}

inline Kind parse_kind(std::string_view name) {
  if (name == "fsa") return Kind::fsa;
  if (name == "tss") return Kind::tss;
  if (name == "ds") return Kind::ds;
  if (name == "hsbm") return Kind::hsbm;
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

namespace detail {

// Evaluated positions of one block search; each position is counted once.
class ProbeCache {
 public:
  ProbeCache(const Frame& current, const Frame& previous, BlockPosition block, SearchWindow window)
      : current_(current),
        previous_(previous),
        block_(block),
        range_(candidate_range(block, window, previous.size())) {}

  bool admissible(MotionVector mv) const noexcept { return range_.contains(mv); }

  SadValue probe(MotionVector mv) {
    auto [it, inserted] = seen_.try_emplace(mv, 0);
    if (inserted) it->second = sad_unchecked(current_, previous_, block_, mv);
    return it->second;
  }

  int evaluations() const noexcept { return static_cast<int>(seen_.size()); }

 private:
  const Frame& current_;
  const Frame& previous_;
  BlockPosition block_;
  DisplacementRange range_;
  std::map<MotionVector, SadValue> seen_;
};

// Best admissible point of center + offsets; inadmissible points are skipped.
template <std::size_t K>
MotionVector best_of(ProbeCache& cache, MotionVector center,
                     const std::array<MotionVector, K>& offsets, SadValue& best_sad) {
  MotionVector best = center;
  best_sad = cache.probe(center);
  for (const MotionVector off : offsets) {
    const MotionVector mv{center.u + off.u, center.v + off.v};
    if (!cache.admissible(mv)) continue;
    const SadValue s = cache.probe(mv);
    if (precedes(s, mv, best_sad, best)) {
      best_sad = s;
      best = mv;
    }
  }
  return best;
}

inline void check_inputs(const Frame& current, const Frame& previous) {
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
}

}  // namespace detail

// Initial step 2^(ceil(log2 W) - 1), halved each round down to 1.
inline int tss_initial_step(SearchWindow window) noexcept {
  int step = 1;
  while (step * 2 < window.w()) step *= 2;
  return step;
}

inline SearchOutcome tss_search(const Frame& current, const Frame& previous, BlockPosition block,
                                SearchWindow window) {
  detail::check_inputs(current, previous);
  detail::ProbeCache cache(current, previous, block, window);
  MotionVector center{0, 0};
  SadValue best_sad = 0;
  for (int s = tss_initial_step(window); s >= 1; s /= 2) {
    const std::array<MotionVector, 8> ring{{{-s, -s}, {0, -s}, {s, -s}, {-s, 0},
                                            {s, 0}, {-s, s}, {0, s}, {s, s}}};
    center = detail::best_of(cache, center, ring, best_sad);
  }
  return {center, best_sad, cache.evaluations()};
}

inline SearchOutcome ds_search(const Frame& current, const Frame& previous, BlockPosition block,
                               SearchWindow window) {
  static constexpr std::array<MotionVector, 8> kLarge{{{0, -2}, {-1, -1}, {1, -1}, {-2, 0},
                                                       {2, 0}, {-1, 1}, {1, 1}, {0, 2}}};
  static constexpr std::array<MotionVector, 4> kSmall{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
  detail::check_inputs(current, previous);
  detail::ProbeCache cache(current, previous, block, window);
  MotionVector center{0, 0};
  SadValue best_sad = 0;
  // precedes() is a strict total order, so recentering cannot cycle.
  for (;;) {
    const MotionVector next = detail::best_of(cache, center, kLarge, best_sad);
    if (next == center) break;
    center = next;
  }
  center = detail::best_of(cache, center, kSmall, best_sad);
  return {center, best_sad, cache.evaluations()};
}

}  // namespace mebench::baselines
