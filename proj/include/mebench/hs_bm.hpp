#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "mebench/fitness_approx.hpp"
#include "mebench/frame.hpp"
#include "mebench/harmony_search.hpp"
#include "mebench/matching.hpp"
#include "mebench/parallel.hpp"
#include "mebench/random.hpp"

// Block matching by Harmony Search with nearest-neighbour fitness
// approximation (HS-BM).
namespace mebench::hsbm {

inline constexpr int kPatternSize = 5;

struct HsBmConfig {
  SearchWindow window{8};
  double hmcr = 0.7;
  double par = 0.3;
  double bw = 8.0;
  int ni = 25;
  int hms = kPatternSize;
  double d = 3.0;  // 0 disables estimation
  std::uint64_t seed = 0;
  approx::Metric metric = approx::Metric::euclidean;
  // Re-initialize with 1 + round(r * W) instead of round(r * W).
  bool literal_reinit = false;

  // Tuned defaults: (bw, ni) = (8, 25) for W = 8 and (16, 45) for W = 16.
  // Other windows use bw = W and the iteration budget of the nearer tuning.
  static HsBmConfig defaults(SearchWindow window) {
    HsBmConfig c;
    c.window = window;
    c.bw = window.w();
    c.ni = window.w() <= 8 ? 25 : 45;
    return c;
  }

  hs::Params params() const { return {hms, hmcr, par, bw, ni}; }

  void validate() const {
    params().validate();
    if (hms != kPatternSize) {
      throw ParameterError("hms must equal the initial pattern size (5), got " + std::to_string(hms));
    }
    if (!(d >= 0.0)) throw ParameterError("distance threshold d must be non-negative");
  }
};

struct BlockEstimate {
  MotionVector mv;
  SadValue sad = 0;
  bool sad_is_exact = true;
  int candidates_generated = 0;
  int sad_evaluations = 0;
  int sad_estimations = 0;
  int cache_hits = 0;

  friend bool operator==(const BlockEstimate&, const BlockEstimate&) = default;
};

// Center plus an axis-aligned cross at half-window radius.
inline std::array<MotionVector, kPatternSize> initial_pattern(SearchWindow window) {
  const int r = (window.w() + 1) / 2;
  return {{{0, 0}, {-r, 0}, {r, 0}, {0, -r}, {0, r}}};
}

// Moves p toward (0,0) along the segment until it is a valid candidate.
inline MotionVector clip_toward_origin(MotionVector p, const DisplacementRange& range) {
  const int steps = std::max(std::abs(p.u), std::abs(p.v));
  for (int s = steps; s > 0; --s) {
    const MotionVector q{static_cast<int>(std::lround(static_cast<double>(p.u) * s / steps)),
                         static_cast<int>(std::lround(static_cast<double>(p.v) * s / steps))};
    if (range.contains(q)) return q;
  }
  return {0, 0};
}

namespace detail {

inline hs::Bounds<2> bounds_of(const DisplacementRange& r) {
  return {{r.u_min, r.v_min}, {r.u_max, r.v_max}};
}

inline std::array<hs::Point<2>, kPatternSize> seeds_for(SearchWindow window,
                                                         const DisplacementRange& range) {
  std::array<hs::Point<2>, kPatternSize> seeds{};
  const auto pattern = initial_pattern(window);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const MotionVector q = clip_toward_origin(pattern[i], range);
    seeds[i] = {q.u, q.v};
  }
  return seeds;
}

inline hs::ImproviseOptions improvise_options(const HsBmConfig& config) {
  return {config.literal_reinit ? hs::Reinit::symmetric_plus_one : hs::Reinit::symmetric,
          config.window.w()};
}

inline void check_inputs(const Frame& current, const Frame& previous, BlockPosition block) {
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
  if (block.n <= 0 || block.x < 0 || block.y < 0 || block.x + block.n > current.width() ||
      block.y + block.n > current.height()) {
    throw GeometryError("block lies outside the current frame");
  }
}

}  // namespace detail

// One HS-BM run for a single block. Seeds the memory with the clipped
// initial pattern, evaluates it, then improvises ni candidates; each
// candidate's SAD is evaluated or estimated through the history archive.
template <UnitRandom R>
BlockEstimate estimate_block(const Frame& current, const Frame& previous, BlockPosition block,
                             const HsBmConfig& config, R& rng) {
  config.validate();
  detail::check_inputs(current, previous, block);
  const DisplacementRange range = candidate_range(block, config.window, previous.size());
  const auto seeds = detail::seeds_for(config.window, range);

  approx::HistoryArchive<2> archive;
  BlockEstimate out;
  auto fitness = [&](const hs::Point<2>& p) -> hs::Assessment {
    ++out.candidates_generated;
    const auto decision = approx::decide_and_fit(
        p, archive, config.d,
        [&](const hs::Point<2>& q) { return sad_unchecked(current, previous, block, {q[0], q[1]}); },
        config.metric);
    switch (decision.rule) {
      case approx::Rule::nni:
        ++out.sad_estimations;
        return {decision.value, hs::Provenance::estimated};
      case approx::Rule::cache_hit:
        ++out.cache_hits;
        return {decision.value, hs::Provenance::evaluated};
      default:
        return {decision.value, hs::Provenance::evaluated};
    }
  };

  const auto result = hs::optimize<2>(fitness, detail::bounds_of(range), config.params(),
                                      std::span<const hs::Point<2>>(seeds), rng,
                                      detail::improvise_options(config));
  out.mv = {result.best[0], result.best[1]};
  out.sad = static_cast<SadValue>(result.best_fitness);
  out.sad_is_exact = result.provenance == hs::Provenance::evaluated;
  out.sad_evaluations = static_cast<int>(approx::evaluation_count(archive));
  return out;
}

// The same search with every candidate evaluated exactly (no archive, no
// estimation, no caching). Consumes the rng identically to estimate_block.
template <UnitRandom R>
BlockEstimate estimate_block_plain(const Frame& current, const Frame& previous,
                                   BlockPosition block, const HsBmConfig& config, R& rng) {
  config.validate();
  detail::check_inputs(current, previous, block);
  const DisplacementRange range = candidate_range(block, config.window, previous.size());
  const auto seeds = detail::seeds_for(config.window, range);

  BlockEstimate out;
  auto fitness = [&](const hs::Point<2>& p) {
    ++out.candidates_generated;
    ++out.sad_evaluations;
    return sad_unchecked(current, previous, block, {p[0], p[1]});
  };
  const auto result = hs::optimize<2>(fitness, detail::bounds_of(range), config.params(),
                                      std::span<const hs::Point<2>>(seeds), rng,
                                      detail::improvise_options(config));
  out.mv = {result.best[0], result.best[1]};
  out.sad = static_cast<SadValue>(result.best_fitness);
  return out;
}

struct EstimationReport {
  std::vector<BlockEstimate> blocks;  // row-major
  long long candidates_generated = 0;
  long long sad_evaluations = 0;
  long long sad_estimations = 0;
  long long cache_hits = 0;
  long long total_sad = 0;

  double mean_evaluations_per_block() const noexcept {
    return blocks.empty() ? 0.0 : static_cast<double>(sad_evaluations) / blocks.size();
  }

  friend bool operator==(const EstimationReport&, const EstimationReport&) = default;
};

struct FrameEstimate {
  MotionField field;
  EstimationReport report;
};

// Runs estimate_block on every block. Block (row, col) of frame
// `frame_index` always draws from the same rng substream, so results do not
// depend on `jobs`.
inline FrameEstimate estimate_frame(const Frame& current, const Frame& previous,
                                    const HsBmConfig& config, int n = 16,
                                    std::uint64_t frame_index = 0, int jobs = 1,
                                    bool plain = false) {
  config.validate();
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
  const auto blocks = partition(current, n);
  FrameEstimate out{MotionField::for_frame(current.size(), n), {}};
  out.report.blocks.resize(blocks.size());
  const int cols = out.field.cols();

  parallel_for(blocks.size(), jobs, [&](std::size_t i) {
    const auto row = static_cast<std::uint64_t>(i / cols);
    const auto col = static_cast<std::uint64_t>(i % cols);
    Rng rng(substream_seed(config.seed, frame_index, row, col));
    out.report.blocks[i] = plain ? estimate_block_plain(current, previous, blocks[i], config, rng)
                                 : estimate_block(current, previous, blocks[i], config, rng);
  });

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockEstimate& b = out.report.blocks[i];
    out.field.vector_at(i) = b.mv;
    out.field.sad_at(i) = b.sad;
    out.report.candidates_generated += b.candidates_generated;
    out.report.sad_evaluations += b.sad_evaluations;
    out.report.sad_estimations += b.sad_estimations;
    out.report.cache_hits += b.cache_hits;
    out.report.total_sad += b.sad;
  }
  return out;
}

}  // namespace mebench::hsbm
