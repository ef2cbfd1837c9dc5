#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mebench/error.hpp"

namespace mebench {

struct FrameSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

// One 8-bit luminance plane, row-major. Immutable after construction.
class Frame {
 public:
  Frame() = default;

  Frame(int width, int height, std::vector<std::uint8_t> samples)
      : width_(width), height_(height), samples_(std::move(samples)) {
    if (width <= 0 || height <= 0) {
      throw GeometryError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    if (samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw GeometryError("frame sample count " + std::to_string(samples_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
  }

  // Constant-valued frame.
  static Frame filled(int width, int height, std::uint8_t value) {
    return Frame(width, height,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  FrameSize size() const noexcept { return {width_, height_}; }
  bool empty() const noexcept { return samples_.empty(); }

  std::uint8_t at(int x, int y) const { return samples_[index(x, y)]; }

  std::span<const std::uint8_t> row(int y) const {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

// Top-left corner and edge length of an n x n block.
struct BlockPosition {
  int x = 0;
  int y = 0;
  int n = 16;

  friend bool operator==(const BlockPosition&, const BlockPosition&) = default;
};

// Integer-pel displacement from a block in the current frame to its match in
// the previous frame.
struct MotionVector {
  int u = 0;
  int v = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
  friend auto operator<=>(const MotionVector&, const MotionVector&) = default;
};

// Maximum displacement per axis; candidates live in [-w, w]^2.
class SearchWindow {
 public:
  explicit SearchWindow(int w) : w_(w) {
    if (w <= 0) throw ParameterError("search window must be positive, got " + std::to_string(w));
  }
  int w() const noexcept { return w_; }
  int points() const noexcept { return (2 * w_ + 1) * (2 * w_ + 1); }

  bool contains(MotionVector mv) const noexcept {
    return mv.u >= -w_ && mv.u <= w_ && mv.v >= -w_ && mv.v <= w_;
  }

  friend bool operator==(const SearchWindow&, const SearchWindow&) = default;

 private:
  int w_;
};

// Inclusive displacement rectangle.
struct DisplacementRange {
  int u_min = 0;
  int u_max = 0;
  int v_min = 0;
  int v_max = 0;

  bool contains(MotionVector mv) const noexcept {
    return mv.u >= u_min && mv.u <= u_max && mv.v >= v_min && mv.v <= v_max;
  }
};

// Tiles the frame with non-overlapping n x n blocks, row-major.
inline std::vector<BlockPosition> partition(FrameSize size, int n) {
  if (n <= 0) throw GeometryError("block edge must be positive, got " + std::to_string(n));
  if (size.width % n != 0) {
    throw GeometryError("frame width " + std::to_string(size.width) +
                        " is not divisible by block edge " + std::to_string(n));
  }
  if (size.height % n != 0) {
    throw GeometryError("frame height " + std::to_string(size.height) +
                        " is not divisible by block edge " + std::to_string(n));
  }
  std::vector<BlockPosition> blocks;
  blocks.reserve(static_cast<std::size_t>(size.width / n) * (size.height / n));
  for (int y = 0; y < size.height; y += n) {
    for (int x = 0; x < size.width; x += n) blocks.push_back({x, y, n});
  }
  return blocks;
}

inline std::vector<BlockPosition> partition(const Frame& frame, int n) {
  return partition(frame.size(), n);
}

// True iff the whole n x n candidate block at (x+u, y+v) lies inside a frame
// of the given size.
inline bool candidate_valid(MotionVector mv, BlockPosition block, FrameSize prev) noexcept {
  const int cx = block.x + mv.u;
  const int cy = block.y + mv.v;
  return cx >= 0 && cy >= 0 && cx + block.n <= prev.width && cy + block.n <= prev.height;
}

// The window clipped to frame validity. Validity is separable per axis, so
// the valid set is always this rectangle; it always contains (0,0) for a
// block inside the frame.
inline DisplacementRange candidate_range(BlockPosition block, SearchWindow window,
                                         FrameSize prev) noexcept {
  const int w = window.w();
  return {std::max(-w, -block.x), std::min(w, prev.width - block.n - block.x),
          std::max(-w, -block.y), std::min(w, prev.height - block.n - block.y)};
}

// Every MV in [-W, W]^2 passing candidate_valid, ordered by v then u.
inline std::vector<MotionVector> valid_candidates(BlockPosition block, SearchWindow window,
                                                  FrameSize prev) {
  std::vector<MotionVector> out;
  const int w = window.w();
  for (int v = -w; v <= w; ++v) {
    for (int u = -w; u <= w; ++u) {
      if (candidate_valid({u, v}, block, prev)) out.push_back({u, v});
    }
  }
  return out;
}

// One MotionVector and SAD per block of a frame partition.
class MotionField {
 public:
  MotionField() = default;
  MotionField(int cols, int rows, int n)
      : cols_(cols),
        rows_(rows),
        n_(n),
        vectors_(static_cast<std::size_t>(cols) * rows),
        sads_(static_cast<std::size_t>(cols) * rows, 0) {
    if (cols <= 0 || rows <= 0 || n <= 0) throw GeometryError("motion field dimensions must be positive");
  }

  static MotionField for_frame(FrameSize size, int n) {
    partition(size, n);  // validates divisibility
    return MotionField(size.width / n, size.height / n, n);
  }

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  int block_edge() const noexcept { return n_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  MotionVector& vector(int col, int row) { return vectors_[flat(col, row)]; }
  MotionVector vector(int col, int row) const { return vectors_[flat(col, row)]; }
  std::uint32_t& sad(int col, int row) { return sads_[flat(col, row)]; }
  std::uint32_t sad(int col, int row) const { return sads_[flat(col, row)]; }

  const std::vector<MotionVector>& vectors() const noexcept { return vectors_; }
  const std::vector<std::uint32_t>& sads() const noexcept { return sads_; }
  MotionVector& vector_at(std::size_t i) { return vectors_[i]; }
  MotionVector vector_at(std::size_t i) const { return vectors_[i]; }
  std::uint32_t& sad_at(std::size_t i) { return sads_[i]; }
  std::uint32_t sad_at(std::size_t i) const { return sads_[i]; }

  friend bool operator==(const MotionField&, const MotionField&) = default;

 private:
  std::size_t flat(int col, int row) const noexcept {
    return static_cast<std::size_t>(row) * cols_ + col;
  }

  int cols_ = 0;
  int rows_ = 0;
  int n_ = 0;
  std::vector<MotionVector> vectors_;
  std::vector<std::uint32_t> sads_;
};

}  // namespace mebench
