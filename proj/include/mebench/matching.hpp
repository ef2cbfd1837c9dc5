#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>

#include "mebench/frame.hpp"

namespace mebench {

// Sum of absolute differences; a 16x16 block tops out at 65,280.
using SadValue = std::uint32_t;

struct SearchOutcome {
  MotionVector mv;
  SadValue sad = 0;
  int evaluations = 0;

  friend bool operator==(const SearchOutcome&, const SearchOutcome&) = default;
};

// Strict total order used to break SAD ties: smaller SAD, then smaller
// u^2 + v^2, then smaller v, then smaller u.
inline bool precedes(SadValue a_sad, MotionVector a, SadValue b_sad, MotionVector b) noexcept {
  if (a_sad != b_sad) return a_sad < b_sad;
  const int ra = a.u * a.u + a.v * a.v;
  const int rb = b.u * b.u + b.v * b.v;
  if (ra != rb) return ra < rb;
  if (a.v != b.v) return a.v < b.v;
  return a.u < b.u;
}

// SAD without validity checks. The candidate block must lie inside previous.
inline SadValue sad_unchecked(const Frame& current, const Frame& previous, BlockPosition block,
                              MotionVector mv) noexcept {
  SadValue total = 0;
  for (int j = 0; j < block.n; ++j) {
    const auto cur = current.row(block.y + j).subspan(static_cast<std::size_t>(block.x), block.n);
    const auto ref = previous.row(block.y + mv.v + j)
                         .subspan(static_cast<std::size_t>(block.x + mv.u), block.n);
    SadValue row_sum = 0;
    for (int i = 0; i < block.n; ++i) {
      row_sum += static_cast<SadValue>(std::abs(int{cur[i]} - int{ref[i]}));
    }
    total += row_sum;
  }
  return total;
}

inline SadValue sad(const Frame& current, const Frame& previous, BlockPosition block,
                    MotionVector mv) {
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
  if (block.n <= 0 || block.x < 0 || block.y < 0 || block.x + block.n > current.width() ||
      block.y + block.n > current.height()) {
    throw GeometryError("block lies outside the current frame");
  }
  if (!candidate_valid(mv, block, previous.size())) {
    throw GeometryError("invalid candidate (" + std::to_string(mv.u) + "," + std::to_string(mv.v) +
                        ") for block at (" + std::to_string(block.x) + "," +
                        std::to_string(block.y) + ")");
  }
  return sad_unchecked(current, previous, block, mv);
}

// Exhaustive search over every valid candidate in the window.
inline SearchOutcome full_search(const Frame& current, const Frame& previous, BlockPosition block,
                                 SearchWindow window) {
  if (current.size() != previous.size()) {
    throw GeometryError("current and previous frames differ in size");
  }
  const DisplacementRange range = candidate_range(block, window, previous.size());
  SearchOutcome best{{0, 0}, std::numeric_limits<SadValue>::max(), 0};
  for (int v = range.v_min; v <= range.v_max; ++v) {
    for (int u = range.u_min; u <= range.u_max; ++u) {
      const MotionVector mv{u, v};
      const SadValue s = sad_unchecked(current, previous, block, mv);
      ++best.evaluations;
      if (precedes(s, mv, best.sad, best.mv)) {
        best.sad = s;
        best.mv = mv;
      }
    }
  }
  return best;
}

// Predicted frame: every block copied from previous at its displaced position.
inline Frame compensate(const Frame& previous, const MotionField& field, int n) {
  if (field.block_edge() != n || field.cols() * n != previous.width() ||
      field.rows() * n != previous.height()) {
    throw GeometryError("motion field geometry does not match the frame partition");
  }
  std::vector<std::uint8_t> out(previous.samples().size());
  const int width = previous.width();
  for (int row = 0; row < field.rows(); ++row) {
    for (int col = 0; col < field.cols(); ++col) {
      const MotionVector mv = field.vector(col, row);
      const BlockPosition block{col * n, row * n, n};
      if (!candidate_valid(mv, block, previous.size())) {
        throw GeometryError("motion field holds an invalid vector at block (" +
                            std::to_string(col) + "," + std::to_string(row) + ")");
      }
      for (int j = 0; j < n; ++j) {
        const auto src = previous.row(block.y + mv.v + j);
        for (int i = 0; i < n; ++i) {
          out[static_cast<std::size_t>(block.y + j) * width + block.x + i] = src[block.x + mv.u + i];
        }
      }
    }
  }
  return Frame(previous.width(), previous.height(), std::move(out));
}

}  // namespace mebench
