#include <gtest/gtest.h>

#include <random>

#include "mebench/matching.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace mebench;
using namespace mebench::testing;

TEST(Sad, IdenticalFramesGiveZero) {
  const Frame f = noise_frame(32, 32, 1);
  EXPECT_EQ(sad(f, f, {16, 16, 16}, {0, 0}), 0u);
}

TEST(Sad, ConstantBlocks) {
  EXPECT_EQ(sad(Frame::filled(32, 32, 10), Frame::filled(32, 32, 7), {0, 0, 16}, {0, 0}), 768u);
}

TEST(Sad, MaximumFitsAccumulator) {
  EXPECT_EQ(sad(Frame::filled(16, 16, 255), Frame::filled(16, 16, 0), {0, 0, 16}, {0, 0}), 65280u);
}

TEST(Sad, MatchesDoubleLoopReference) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Frame cur = noise_frame(48, 48, gen());
    const Frame prev = noise_frame(48, 48, gen());
    const int u = static_cast<int>(gen() % 33) - 16;
    const int v = static_cast<int>(gen() % 33) - 16;
    EXPECT_EQ(static_cast<long>(sad(cur, prev, {16, 16, 16}, {u, v})),
              naive_sad(cur, prev, 16, 16, 16, u, v));
  }
}

TEST(Sad, SymmetricUnderSwappingPixelSets) {
  const Frame a = noise_frame(48, 48, 3);
  const Frame b = noise_frame(48, 48, 4);
  EXPECT_EQ(sad(a, b, {16, 16, 16}, {3, -5}), sad(b, a, {19, 11, 16}, {-3, 5}));
}

TEST(Sad, InvalidCandidateThrows) {
  const Frame f = noise_frame(32, 32, 5);
  EXPECT_THROW(sad(f, f, {0, 0, 16}, {-1, 0}), GeometryError);
  EXPECT_THROW(sad(f, noise_frame(48, 32, 5), {0, 0, 16}, {0, 0}), GeometryError);
}

TEST(FullSearch, CopyGivesZeroVector) {
  const Frame f = texture(64, 64, 9);
  const auto r = full_search(f, f, {16, 16, 16}, SearchWindow{8});
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
  EXPECT_EQ(r.sad, 0u);
}

TEST(FullSearch, RecoversSyntheticShift) {
  const Frame cur = noise_frame(80, 80, 21);
  const Frame prev = displaced_previous(cur, 2, -3, noise_frame(80, 80, 22));
  for (const auto& block : partition(cur, 16)) {
    const auto range = candidate_range(block, SearchWindow{8}, cur.size());
    const bool source_inside = block.x + 2 + 16 <= 80 && block.y - 3 >= 0;
    if (!source_inside || !range.contains({2, -3})) continue;
    const auto r = full_search(cur, prev, block, SearchWindow{8});
    EXPECT_EQ(r.mv, (MotionVector{2, -3}));
    EXPECT_EQ(r.sad, 0u);
    // 0 is attained only at the true shift.
    int zeros = 0;
    for (const auto mv : valid_candidates(block, SearchWindow{8}, prev.size())) {
      zeros += naive_sad(cur, prev, block.x, block.y, 16, mv.u, mv.v) == 0;
    }
    EXPECT_EQ(zeros, 1);
  }
}

TEST(FullSearch, InteriorEvaluationCounts) {
  const Frame f = noise_frame(64, 64, 2);
  EXPECT_EQ(full_search(f, f, {16, 16, 16}, SearchWindow{8}).evaluations, 289);
  const Frame g = noise_frame(96, 96, 2);
  EXPECT_EQ(full_search(g, g, {32, 32, 16}, SearchWindow{16}).evaluations, 1089);
  EXPECT_EQ(full_search(f, f, {0, 0, 16}, SearchWindow{8}).evaluations, 81);
}

TEST(FullSearch, TieBreakPrefersCenterThenSmallerVThenSmallerU) {
  const Frame flat = Frame::filled(64, 64, 50);
  EXPECT_EQ(full_search(flat, flat, {16, 16, 16}, SearchWindow{8}).mv, (MotionVector{0, 0}));
  EXPECT_TRUE(precedes(5, {1, 0}, 5, {0, 2}));
  EXPECT_TRUE(precedes(5, {0, -1}, 5, {-1, 0}));
  EXPECT_TRUE(precedes(5, {-1, 0}, 5, {1, 0}));
  EXPECT_TRUE(precedes(4, {8, 8}, 5, {0, 0}));
  EXPECT_FALSE(precedes(5, {1, 0}, 5, {1, 0}));
}

TEST(FullSearch, AgreesWithNaiveEnumeration) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Frame cur = noise_frame(24, 24, gen());
    // Low-entropy previous frame so that SAD ties actually occur.
    std::vector<std::uint8_t> px(24 * 24);
    for (auto& p : px) p = static_cast<std::uint8_t>(gen() % 3);
    const Frame prev(24, 24, std::move(px));
    const Frame cur_low = trial % 2 ? cur : Frame::filled(24, 24, 1);
    for (const auto& block : partition(cur_low, 8)) {
      const auto got = full_search(cur_low, prev, block, SearchWindow{4});
      const auto want = naive_full_search(cur_low, prev, block.x, block.y, 8, 4);
      EXPECT_EQ(got.mv, (MotionVector{want.u, want.v}));
      EXPECT_EQ(static_cast<long>(got.sad), want.sad);
      EXPECT_EQ(got.evaluations, want.count);
    }
  }
}

TEST(FullSearch, Deterministic) {
  const Frame cur = texture(64, 64, 4);
  const Frame prev = texture(64, 64, 5);
  const auto a = full_search(cur, prev, {16, 32, 16}, SearchWindow{8});
  for (int i = 0; i < 5; ++i) EXPECT_EQ(full_search(cur, prev, {16, 32, 16}, SearchWindow{8}), a);
}

TEST(Compensate, ZeroFieldIsIdentity) {
  const Frame prev = noise_frame(48, 32, 8);
  const auto field = MotionField::for_frame(prev.size(), 16);
  EXPECT_EQ(compensate(prev, field, 16), prev);
}

TEST(Compensate, CopiesDisplacedBlock) {
  const Frame prev = noise_frame(32, 16, 8);
  auto field = MotionField::for_frame(prev.size(), 16);
  field.vector(0, 0) = {1, 0};
  const Frame out = compensate(prev, field, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) EXPECT_EQ(out.at(x, y), prev.at(x + 1, y));
    for (int x = 16; x < 32; ++x) EXPECT_EQ(out.at(x, y), prev.at(x, y));
  }
}

TEST(Compensate, FullSearchFieldReconstructsShiftedFrame) {
  // Texture surrounded by a flat band: border blocks match at (0,0) and
  // interior blocks at the shift, so the prediction is exact everywhere.
  const int size = 96;
  const Frame tex = noise_frame(size, size, 31);
  std::vector<std::uint8_t> px(size * size, 128);
  for (int y = 32; y < size - 32; ++y)
    for (int x = 32; x < size - 32; ++x) px[y * size + x] = tex.at(x, y);
  const Frame prev(size, size, std::move(px));
  const Frame cur = displaced_previous(prev, -2, 3, Frame::filled(size, size, 128));

  auto field = MotionField::for_frame(cur.size(), 16);
  for (int row = 0; row < field.rows(); ++row) {
    for (int col = 0; col < field.cols(); ++col) {
      const auto r = full_search(cur, prev, {col * 16, row * 16, 16}, SearchWindow{8});
      field.vector(col, row) = r.mv;
      EXPECT_EQ(r.sad, 0u);
    }
  }
  EXPECT_EQ(compensate(prev, field, 16), cur);
}

TEST(Compensate, GeometryMismatchThrows) {
  const Frame prev = noise_frame(48, 32, 8);
  EXPECT_THROW(compensate(prev, MotionField(2, 2, 16), 16), GeometryError);
  EXPECT_THROW(compensate(prev, MotionField::for_frame(prev.size(), 16), 8), GeometryError);
}
