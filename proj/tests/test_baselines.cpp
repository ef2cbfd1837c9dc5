#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mebench/baselines.hpp"
#include "mebench/hs_bm.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace mebench;
using namespace mebench::baselines;
using namespace mebench::testing;

namespace {

// Paraboloid centred on (cx, cy); a block centred on it has a SAD surface
// that grows with the distance from the true displacement.
Frame bowl(int size, int cx, int cy) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const int r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      px[static_cast<std::size_t>(y) * size + x] = static_cast<std::uint8_t>(std::min(255, r2 / 5));
    }
  }
  return Frame(size, size, std::move(px));
}

}  // namespace

TEST(Kind, NamesRoundTrip) {
  for (Kind k : {Kind::fsa, Kind::tss, Kind::ds, Kind::hsbm}) EXPECT_EQ(parse_kind(to_string(k)), k);
  EXPECT_THROW(parse_kind("ntss"), ParameterError);
}

TEST(Tss, InitialStep) {
  EXPECT_EQ(tss_initial_step(SearchWindow{8}), 4);
  EXPECT_EQ(tss_initial_step(SearchWindow{16}), 8);
  EXPECT_EQ(tss_initial_step(SearchWindow{7}), 4);
  EXPECT_EQ(tss_initial_step(SearchWindow{1}), 1);
}

TEST(Tss, FlatFrameCostsTwentyFiveEvaluations) {
  const Frame flat = Frame::filled(64, 64, 90);
  const auto r = tss_search(flat, flat, {24, 24, 16}, SearchWindow{8});
  EXPECT_EQ(r.evaluations, 25);
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
  EXPECT_EQ(r.sad, 0u);
}

TEST(Tss, StaticTextureGivesZeroVector) {
  const Frame f = texture(64, 64, 3);
  EXPECT_EQ(tss_search(f, f, {24, 24, 16}, SearchWindow{8}).mv, (MotionVector{0, 0}));
}

TEST(Tss, ConvergesOnUnimodalSurface) {
  const Frame cur = bowl(64, 32, 32);
  const Frame prev = bowl(64, 35, 35);
  const auto r = tss_search(cur, prev, {24, 24, 16}, SearchWindow{8});
  EXPECT_EQ(r.mv, (MotionVector{3, 3}));
  EXPECT_EQ(r.sad, 0u);
  EXPECT_LE(r.evaluations, 25);
}

TEST(Tss, BorderBlockCountsOnlyValidProbes) {
  const Frame flat = Frame::filled(64, 64, 90);
  const auto r = tss_search(flat, flat, {0, 0, 16}, SearchWindow{8});
  EXPECT_LT(r.evaluations, 25);
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
}

TEST(Ds, ZeroMotionCostsThirteenEvaluations) {
  const Frame flat = Frame::filled(64, 64, 90);
  const auto r = ds_search(flat, flat, {24, 24, 16}, SearchWindow{8});
  EXPECT_EQ(r.evaluations, 13);
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
}

TEST(Ds, FindsUnitDisplacement) {
  const Frame cur = bowl(64, 32, 32);
  const Frame prev = bowl(64, 33, 32);
  const auto r = ds_search(cur, prev, {24, 24, 16}, SearchWindow{8});
  EXPECT_EQ(r.mv, (MotionVector{1, 0}));
  EXPECT_EQ(r.sad, 0u);
}

TEST(Ds, FollowsLongDisplacementWithinWindow) {
  const Frame cur = bowl(64, 32, 32);
  const Frame prev = bowl(64, 38, 27);
  const auto r = ds_search(cur, prev, {24, 24, 16}, SearchWindow{8});
  EXPECT_EQ(r.mv, (MotionVector{6, -5}));
}

TEST(Ds, StaysInsideWindow) {
  // A surface whose descent direction leaves the window.
  const Frame cur = bowl(96, 48, 48);
  const Frame prev = bowl(96, 62, 48);
  const auto r = ds_search(cur, prev, {40, 40, 16}, SearchWindow{8});
  EXPECT_TRUE(SearchWindow{8}.contains(r.mv));
  EXPECT_EQ(r.mv.u, 8);
}

TEST(Baselines, ResultsAreValidWithExactSad) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame cur = texture(80, 64, gen());
    const Frame prev = texture(80, 64, gen());
    for (const auto& block : partition(cur, 16)) {
      for (int w : {8, 16}) {
        for (const auto& r : {tss_search(cur, prev, block, SearchWindow{w}),
                              ds_search(cur, prev, block, SearchWindow{w})}) {
          EXPECT_TRUE(SearchWindow{w}.contains(r.mv));
          EXPECT_TRUE(candidate_valid(r.mv, block, prev.size()));
          EXPECT_EQ(static_cast<long>(r.sad), naive_sad(cur, prev, block.x, block.y, 16, r.mv.u, r.mv.v));
          EXPECT_GE(r.evaluations, 1);
          EXPECT_LE(r.evaluations, static_cast<int>(valid_candidates(block, SearchWindow{w}, prev.size()).size()));
        }
      }
    }
  }
}

TEST(Baselines, FullSearchDominates) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame cur = noise_frame(64, 64, gen());
    const Frame prev = trial % 2 ? noise_frame(64, 64, gen()) : texture(64, 64, gen());
    for (const auto& block : partition(cur, 16)) {
      const SearchWindow w{8};
      const auto fsa = full_search(cur, prev, block, w);
      EXPECT_LE(fsa.sad, tss_search(cur, prev, block, w).sad);
      EXPECT_LE(fsa.sad, ds_search(cur, prev, block, w).sad);
      Rng rng(gen());
      EXPECT_LE(fsa.sad, hsbm::estimate_block(cur, prev, block, hsbm::HsBmConfig::defaults(w), rng).sad);
    }
  }
}
