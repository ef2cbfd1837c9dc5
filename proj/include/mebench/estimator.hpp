#pragma once

#include <cstdint>
#include <vector>

#include "mebench/baselines.hpp"
#include "mebench/frame.hpp"
#include "mebench/hs_bm.hpp"
#include "mebench/matching.hpp"
#include "mebench/metrics.hpp"
#include "mebench/parallel.hpp"

// Uniform per-frame driver over every block-matching algorithm.
namespace mebench {

struct EstimatorConfig {
  baselines::Kind algorithm = baselines::Kind::hsbm;
  int block = 16;
  hsbm::HsBmConfig hsbm = hsbm::HsBmConfig::defaults(SearchWindow{8});
  int jobs = 1;

  SearchWindow window() const noexcept { return hsbm.window; }
};

struct BlockResult {
  MotionVector mv;
  SadValue sad = 0;
  int evaluations = 0;
  int estimations = 0;
  int candidates = 0;

  friend bool operator==(const BlockResult&, const BlockResult&) = default;
};

struct FrameResult {
  MotionField field;
  std::vector<BlockResult> blocks;  // row-major
  long long total_evaluations = 0;
  long long total_sad = 0;

  double avg_evaluations_per_block() const noexcept {
    return blocks.empty() ? 0.0 : static_cast<double>(total_evaluations) / blocks.size();
  }
};

inline BlockResult estimate_one(const Frame& current, const Frame& previous, BlockPosition block,
                                const EstimatorConfig& config, std::uint64_t frame_index, int row,
                                int col) {
  using baselines::Kind;
  auto from_outcome = [](const SearchOutcome& o) {
    return BlockResult{o.mv, o.sad, o.evaluations, 0, o.evaluations};
  };
  switch (config.algorithm) {
    case Kind::fsa: return from_outcome(full_search(current, previous, block, config.window()));
    case Kind::tss: return from_outcome(baselines::tss_search(current, previous, block, config.window()));
    case Kind::ds: return from_outcome(baselines::ds_search(current, previous, block, config.window()));
    case Kind::hsbm: {
      Rng rng(substream_seed(config.hsbm.seed, frame_index, static_cast<std::uint64_t>(row),
                             static_cast<std::uint64_t>(col)));
      const auto e = hsbm::estimate_block(current, previous, block, config.hsbm, rng);
      return {e.mv, e.sad, e.sad_evaluations, e.sad_estimations, e.candidates_generated};
    }
  }
  throw ParameterError("unknown algorithm");
}

inline FrameResult estimate_frame(const Frame& current, const Frame& previous,
                                  const EstimatorConfig& config, std::uint64_t frame_index = 0) {
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
  if (config.algorithm == baselines::Kind::hsbm) config.hsbm.validate();
  const auto blocks = partition(current, config.block);
  FrameResult out{MotionField::for_frame(current.size(), config.block), {}, 0, 0};
  out.blocks.resize(blocks.size());
  const int cols = out.field.cols();
  parallel_for(blocks.size(), config.jobs, [&](std::size_t i) {
    const int row = static_cast<int>(i) / cols;
    const int col = static_cast<int>(i) % cols;
    out.blocks[i] = estimate_one(current, previous, blocks[i], config, frame_index, row, col);
  });
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.field.vector_at(i) = out.blocks[i].mv;
    out.field.sad_at(i) = out.blocks[i].sad;
    out.total_evaluations += out.blocks[i].evaluations;
    out.total_sad += out.blocks[i].sad;
  }
  return out;
}

inline metrics::FrameMetrics measure(const Frame& current, const Frame& previous,
                                     const FrameResult& result, int block) {
  const Frame predicted = compensate(previous, result.field, block);
  metrics::FrameMetrics m;
  m.mse = metrics::mse(current, predicted);
  m.psnr = metrics::psnr_from_mse(m.mse);
  m.total_evaluations = result.total_evaluations;
  m.avg_evaluations_per_block = result.avg_evaluations_per_block();
  return m;
}

}  // namespace mebench
