// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "raindrop/ncc.hpp"
#include "raindrop/parallel.hpp"

using namespace raindrop;

TEST(NccMap, SelfCorrelationIsNearOne) {
    Rng rng(61);
    const GrayImage a = oracles::random_image(rng, 24, 24);
    const ScalarMap corr = ncc_map(a, a, KernelSize(11));
    for (double v : corr.data()) {
        EXPECT_GE(v, 0.99);
        EXPECT_LE(v, 1.0);
    }
}

TEST(NccMap, InvertedImageAnticorrelates) {
    Rng rng(67);
    const GrayImage a = oracles::random_image(rng, 24, 24);
    GrayImage b(24, 24);
    for (std::size_t i = 0; i < a.size(); ++i) {
        b.data()[i] = static_cast<std::uint8_t>(255 - a.data()[i]);
    }
    const ScalarMap corr = ncc_map(a, b, KernelSize(11));
    for (double v : corr.data()) {
        EXPECT_LE(v, -0.99);
        EXPECT_GE(v, -1.0);
    }
}

TEST(NccMap, MatchesNaivePearsonOracle) {
    Rng rng(71);
    const GrayImage a = oracles::random_image(rng, 16, 16);
    const GrayImage b = oracles::random_image(rng, 16, 16);
    for (int w : {3, 5, 11}) {
        const ScalarMap fast = ncc_map(a, b, KernelSize(w));
        const ScalarMap slow = oracles::ncc_pearson(a, b, w, 1e-4);
        for (std::size_t i = 0; i < fast.size(); ++i) {
            ASSERT_NEAR(fast.data()[i], slow.data()[i], 1e-6) << "window " << w;
        }
    }
}

TEST(NccMap, SymmetricBitForBit) {
    Rng rng(73);
    const GrayImage a = oracles::random_image(rng, 20, 14);
    const GrayImage b = oracles::random_image(rng, 20, 14);
    EXPECT_EQ(ncc_map(a, b, KernelSize(5)), ncc_map(b, a, KernelSize(5)));
}

TEST(NccMap, FlatPatchesStayFinite) {
    const GrayImage flat_a(16, 16, 128);
    const GrayImage flat_b(16, 16, 128);
    const ScalarMap corr = ncc_map(flat_a, flat_b, KernelSize(5));
    for (double v : corr.data()) {
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_LE(std::abs(v), 1.0);
    }
    // one flat, one textured
    Rng rng(79);
    const GrayImage textured = oracles::random_image(rng, 16, 16);
    const ScalarMap mixed = ncc_map(flat_a, textured, KernelSize(5));
    for (double v : mixed.data()) {
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_LE(std::abs(v), 1.0);
    }
}

TEST(NccMap, IntensityShiftBarelyMoves) {
    Rng rng(83);
    GrayImage a(16, 16);
    GrayImage b(16, 16);
    for (auto& v : a.data()) v = static_cast<std::uint8_t>(rng.uniform_int(50, 200));
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = a.data()[i];
    GrayImage shifted = b;
    for (auto& v : shifted.data()) v = static_cast<std::uint8_t>(v + 20);

    const ScalarMap base = ncc_map(a, b, KernelSize(5));
    const ScalarMap moved = ncc_map(a, shifted, KernelSize(5));
    for (std::size_t i = 0; i < base.size(); ++i) {
        ASSERT_NEAR(base.data()[i], moved.data()[i], 1e-4);
    }
}

TEST(NccMap, ValuesAlwaysClampedToUnitInterval) {
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        const GrayImage a = oracles::random_image(rng, 12, 12);
        const GrayImage b = oracles::random_image(rng, 12, 12);
        const ScalarMap corr = ncc_map(a, b, KernelSize(3), 1e-9);  // tiny eps stresses the clamp
        for (double v : corr.data()) {
            ASSERT_GE(v, -1.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

TEST(NccMap, DimensionMismatchThrows) {
    GrayImage a(8, 8, 1), b(8, 9, 1);
    EXPECT_THROW(ncc_map(a, b, KernelSize(5)), DimensionError);
}

TEST(NccDetect, StaticTexturedSequenceIsPositive) {
    Rng rng(89);
    const GrayImage frame = oracles::random_image(rng, 32, 32);
    FrameSequence seq;
    for (int i = 0; i < 5; ++i) seq.frames.push_back(frame);
    const DetectionResult result = ncc_detect(seq, NccParams{});
    EXPECT_TRUE(result.detected);
    EXPECT_GT(result.artifact_fraction, 0.9);
}

TEST(NccDetect, IndependentNoiseIsNegative) {
    Rng rng(97);
    FrameSequence seq;
    for (int i = 0; i < 5; ++i) seq.frames.push_back(oracles::random_image(rng, 32, 32));
    const DetectionResult result = ncc_detect(seq, NccParams{});
    EXPECT_FALSE(result.detected);
}

TEST(NccDetect, NeedsTwoFrames) {
    FrameSequence seq;
    seq.frames.push_back(GrayImage(8, 8, 7));
    EXPECT_THROW(ncc_detect(seq, NccParams{}), InputError);
}

TEST(NccDetect, DeterministicAcrossThreadCounts) {
    Rng rng(101);
    FrameSequence seq;
    for (int i = 0; i < 4; ++i) seq.frames.push_back(oracles::random_image(rng, 48, 32));
    set_worker_threads(1);
    const DetectionResult one = ncc_detect(seq, NccParams{});
    set_worker_threads(4);
    const DetectionResult four = ncc_detect(seq, NccParams{});
    set_worker_threads(1);
    EXPECT_EQ(one.mask, four.mask);
    EXPECT_EQ(one.artifact_fraction, four.artifact_fraction);
}

TEST(NccParams, Validation) {
    FrameSequence seq;
    seq.frames.push_back(GrayImage(8, 8, 1));
    seq.frames.push_back(GrayImage(8, 8, 2));
    NccParams params;
    params.eps = 0.0;
    EXPECT_THROW(ncc_detect(seq, params), ParameterError);
    params.eps = 1e-4;
    params.corr_threshold = 1.5;
    EXPECT_THROW(ncc_detect(seq, params), ParameterError);
}
