/*
 * Copyright 2026 The stec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stec/temporal.hpp"
#include "testutil.hpp"

namespace {

using stec::BlockLoss;
using stec::BorderGeometry;
using stec::Displacement;
using stec::Frame;

TEST(TemporalReplacement, CopiesCoLocatedBlockWithZeroDisplacement) {
  const Frame prev = testutil::noise_frame(64, 64, 0, 1);
  Frame cur = prev;
  cur.index = 1;
  const BlockLoss loss{24, 24, 16};
  const auto estimate = stec::temporal_replacement(cur, prev, loss);
  EXPECT_EQ(estimate.method, "tr");
  EXPECT_EQ(estimate.displacement, (Displacement{0, 0}));
  EXPECT_DOUBLE_EQ(estimate.error_estimate, 0.0);
  EXPECT_EQ(estimate.block, stec::copy_block(prev, 24, 24, 16));
}

TEST(TemporalReplacement, ShiftedContentGivesNonzeroError) {
  const auto field = testutil::noise_plane(96, 96, 2);
  const Frame prev = testutil::crop_frame(field, 16, 16, 64, 64, 0);
  const Frame cur = testutil::crop_frame(field, 19, 16, 64, 64, 1);  // shifted by (3, 0)
  const BlockLoss loss{24, 24, 16};
  const auto estimate = stec::temporal_replacement(cur, prev, loss);
  EXPECT_GT(estimate.error_estimate, 0.0);
  EXPECT_EQ(estimate.block, stec::copy_block(prev, 24, 24, 16));
}

TEST(EstimateTemporalError, IdenticalFramesGiveZero) {
  const Frame prev = testutil::noise_frame(64, 64, 0, 3);
  Frame cur = prev;
  const BlockLoss loss{24, 24, 16};
  EXPECT_DOUBLE_EQ(
      stec::estimate_temporal_error(cur, prev, loss, {0, 0}, BorderGeometry{8}), 0.0);
}

TEST(EstimateTemporalError, ConstantOffsetGivesThatOffset) {
  Frame cur = testutil::noise_frame(64, 64, 1, 4);
  for (auto& s : cur.luma) s = static_cast<stec::Sample>(10 + s % 190);  // room for +5
  Frame prev = cur;
  for (auto& s : prev.luma) s = static_cast<stec::Sample>(s + 5);
  const BlockLoss loss{24, 24, 16};
  for (const int width : {1, 4, 8}) {
    EXPECT_NEAR(stec::estimate_temporal_error(cur, prev, loss, {0, 0}, BorderGeometry{width}),
                5.0, 1e-9);
  }
}

TEST(EstimateTemporalError, HandComputedNineSampleBorder) {
  // 2x2 loss with a one-wide ring of 12 positions; 3 are masked out, so
  // |D| = 9. Three of the nine differ by 1, 2 and 2: sqrt((1+4+4)/9) = 1.
  Frame cur(16, 16, 1, 100);
  Frame prev = cur;
  const BlockLoss loss{6, 6, 2};
  stec::Plane<std::uint8_t> valid(16, 16, 1);
  valid.at(5, 5) = 0;
  valid.at(6, 5) = 0;
  valid.at(7, 5) = 0;
  cur.at(5, 6) = 101;  // differs by 1
  cur.at(8, 6) = 102;  // differs by 2
  cur.at(6, 8) = 98;   // differs by 2
  EXPECT_NEAR(
      stec::estimate_temporal_error(cur, prev, loss, {0, 0}, BorderGeometry{1}, &valid), 1.0,
      1e-12);
}

TEST(EstimateTemporalError, EmptyBorderIsEstimatorError) {
  const Frame prev = testutil::noise_frame(32, 32, 0, 5);
  const Frame cur = prev;
  const BlockLoss loss{8, 8, 8};
  const stec::Plane<std::uint8_t> none(32, 32, 0);  // everything invalid
  EXPECT_THROW(
      stec::estimate_temporal_error(cur, prev, loss, {0, 0}, BorderGeometry{1}, &none),
      stec::EstimatorError);
}

TEST(EstimateTemporalError, SymmetricUnderRoleExchange) {
  const Frame cur = testutil::noise_frame(64, 64, 1, 6);
  const Frame prev = testutil::noise_frame(64, 64, 0, 7);
  const BlockLoss loss{24, 24, 16};
  const Displacement d{3, -2};
  const BlockLoss displaced{loss.x0 + d.dx, loss.y0 + d.dy, loss.size};
  const double forward = stec::estimate_temporal_error(cur, prev, loss, d, BorderGeometry{4});
  const double backward =
      stec::estimate_temporal_error(prev, cur, displaced, {-d.dx, -d.dy}, BorderGeometry{4});
  EXPECT_DOUBLE_EQ(forward, backward);
}

TEST(BorderGeometry, FullRingCardinality) {
  const Frame cur = testutil::noise_frame(64, 64, 0, 8);
  const BlockLoss loss{24, 24, 16};
  // |D| = (B + 2 w)^2 - B^2 when the ring is interior and fully valid.
  EXPECT_EQ(oracle::ring_positions(cur, loss, 8).size(), 768u);
  EXPECT_EQ(oracle::ring_positions(cur, loss, 1).size(), 68u);
}

TEST(Ebma, IdenticalFramesPickOrigin) {
  const Frame prev = testutil::noise_frame(64, 64, 0, 9);
  Frame cur = prev;
  const BlockLoss loss{24, 24, 16};
  const auto estimate = stec::ebma(cur, prev, loss, 16);
  EXPECT_EQ(estimate.method, "ebma");
  EXPECT_EQ(estimate.displacement, (Displacement{0, 0}));
}

TEST(Ebma, RecoversTranslation) {
  const auto field = testutil::noise_plane(128, 128, 10);
  const Frame prev = testutil::crop_frame(field, 20, 20, 64, 64, 0);
  const Frame cur = testutil::crop_frame(field, 18, 21, 64, 64, 1);
  // cur(x, y) = prev(x - 2, y + 1), so the matching displacement is (-2, 1).
  BlockLoss loss{24, 24, 16};
  Frame corrupted = cur;
  for (int y = loss.y0; y < loss.y0 + loss.size; ++y) {
    for (int x = loss.x0; x < loss.x0 + loss.size; ++x) corrupted.at(x, y) = 0;
  }
  const auto estimate = stec::ebma(corrupted, prev, loss, 16);
  EXPECT_EQ(estimate.displacement, (Displacement{-2, 1}));
  EXPECT_EQ(estimate.block, stec::copy_block(prev, 22, 25, 16));
}

TEST(Ebma, ZeroRangeDegeneratesToOrigin) {
  const Frame prev = testutil::noise_frame(64, 64, 0, 11);
  const Frame cur = testutil::noise_frame(64, 64, 1, 12);
  const BlockLoss loss{24, 24, 16};
  EXPECT_EQ(stec::ebma(cur, prev, loss, 0).displacement, (Displacement{0, 0}));
}

TEST(Ebma, EmptyRingIsEstimatorError) {
  const Frame prev = testutil::noise_frame(64, 64, 0, 13);
  const Frame cur = prev;
  const BlockLoss loss{24, 24, 16};
  const stec::Plane<std::uint8_t> none(64, 64, 0);
  EXPECT_THROW(stec::ebma(cur, prev, loss, 16, BorderGeometry{8}, &none),
               stec::EstimatorError);
}

TEST(Ebma, AgreesWithBruteForceOracleOnUnrelatedFrames) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame cur = testutil::noise_frame(64, 64, 1, 1000 + seed);
    const Frame prev = testutil::noise_frame(64, 64, 0, 2000 + seed);
    const BlockLoss loss{24, 24, 16};
    const auto got = stec::ebma(cur, prev, loss, 8).displacement;
    const auto want =
        oracle::brute_force_match(cur, prev, loss, oracle::ring_positions(cur, loss, 1), 8);
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

TEST(Dmve, RecoversTranslation) {
  const auto field = testutil::noise_plane(160, 160, 20);
  const Frame prev = testutil::crop_frame(field, 30, 30, 96, 96, 0);
  const Frame cur = testutil::crop_frame(field, 34, 27, 96, 96, 1);
  // cur(x, y) = prev(x + 4, y - 3).
  const BlockLoss loss{40, 40, 16};
  const auto estimate = stec::dmve(cur, prev, loss, 16);
  EXPECT_EQ(estimate.method, "dmve");
  EXPECT_EQ(estimate.displacement, (Displacement{4, -3}));
  EXPECT_NEAR(estimate.error_estimate, 0.0, 1e-12);
}

TEST(Dmve, FlatFramesTieBreakToOrigin) {
  const Frame prev = testutil::constant_frame(64, 64, 0, 99);
  const Frame cur = testutil::constant_frame(64, 64, 1, 99);
  const BlockLoss loss{24, 24, 16};
  const auto estimate = stec::dmve(cur, prev, loss, 16);
  EXPECT_EQ(estimate.displacement, (Displacement{0, 0}));
  EXPECT_DOUBLE_EQ(estimate.error_estimate, 0.0);
}

TEST(Dmve, PeriodicPatternTieBreaksByRasterOrder) {
  // Horizontal period 8, shifted by 4: zero cost at dx in {-12, -4, 4, 12}
  // (dy = 0). The smallest |dx|+|dy| leaves {-4, 4}; raster order picks -4.
  Frame prev(96, 96, 0);
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 96; ++x) {
      prev.at(x, y) = static_cast<stec::Sample>((x % 8 < 4 ? 60 : 180) + y % 3);
    }
  }
  Frame cur(96, 96, 1);
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 96; ++x) {
      cur.at(x, y) = static_cast<stec::Sample>(((x + 4) % 8 < 4 ? 60 : 180) + y % 3);
    }
  }
  const BlockLoss loss{40, 40, 16};
  EXPECT_EQ(stec::dmve(cur, prev, loss, 16).displacement, (Displacement{-4, 0}));
}

TEST(Dmve, ErrorEstimateEqualsSearchMinimumWhenBordersMatch) {
  // With the match ring equal to the evaluation ring, the reported estimate
  // must be exactly the minimum the search saw: sqrt(min SSD / |D|).
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Frame cur = testutil::noise_frame(64, 64, 1, 3000 + seed);
    const Frame prev = testutil::noise_frame(64, 64, 0, 4000 + seed);
    const BlockLoss loss{24, 24, 16};
    // The loss sits far enough from the edges that every candidate in the
    // +/-8 window keeps block and ring inside the previous frame.
    const auto ring = oracle::ring_positions(cur, loss, 8);
    double min_ssd = std::numeric_limits<double>::infinity();
    for (int dy = -8; dy <= 8; ++dy) {
      for (int dx = -8; dx <= 8; ++dx) {
        double ssd = 0.0;
        for (const auto& [x, y] : ring) {
          const double diff = static_cast<double>(cur.at(x, y)) - prev.at(x + dx, y + dy);
          ssd += diff * diff;
        }
        min_ssd = std::min(min_ssd, ssd);
      }
    }
    const auto estimate = stec::dmve(cur, prev, loss, 8, BorderGeometry{8}, BorderGeometry{8});
    EXPECT_NEAR(estimate.error_estimate, std::sqrt(min_ssd / static_cast<double>(ring.size())),
                1e-9)
        << "seed " << seed;
  }
}

TEST(Dmve, AgreesWithBruteForceOracleOnUnrelatedFrames) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame cur = testutil::noise_frame(64, 64, 1, 5000 + seed);
    const Frame prev = testutil::noise_frame(64, 64, 0, 6000 + seed);
    const BlockLoss loss{24, 24, 16};
    const auto got = stec::dmve(cur, prev, loss, 8).displacement;
    const auto want =
        oracle::brute_force_match(cur, prev, loss, oracle::ring_positions(cur, loss, 8), 8);
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

}  // namespace
