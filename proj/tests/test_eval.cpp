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
#include "raindrop/eval.hpp"

using namespace raindrop;

TEST(SegScores, PerfectMatchScoresOne) {
    Rng rng(3);
    const BinaryMask mask = oracles::random_mask(rng, 16, 16, 0.4);
    const SegScores s = seg_scores(mask, mask);
    EXPECT_EQ(s.iou, 1.0);
    EXPECT_EQ(s.dice, 1.0);
    EXPECT_EQ(s.accuracy, 1.0);
}

TEST(SegScores, EmptyPredictionAgainstNonEmptyTruth) {
    BinaryMask pred(8, 8);
    BinaryMask gt(8, 8);
    gt.at(3, 3) = 1;
    const SegScores s = seg_scores(pred, gt);
    EXPECT_EQ(s.iou, 0.0);
    EXPECT_EQ(s.dice, 0.0);
    EXPECT_LT(s.accuracy, 1.0);
}

TEST(SegScores, EmptyVersusEmptyConvention) {
    BinaryMask pred(8, 8);
    BinaryMask gt(8, 8);
    const SegScores s = seg_scores(pred, gt);
    EXPECT_EQ(s.iou, 1.0);
    EXPECT_EQ(s.dice, 1.0);
    EXPECT_EQ(s.accuracy, 1.0);
}

TEST(SegScores, OverlappingBarsPixelCounts) {
    // pred: 3-pixel bar, gt: overlapping 2-pixel bar in a 4x4 image
    BinaryMask pred(4, 4);
    pred.at(0, 1) = pred.at(1, 1) = pred.at(2, 1) = 1;
    BinaryMask gt(4, 4);
    gt.at(1, 1) = gt.at(2, 1) = 1;
    const SegScores s = seg_scores(pred, gt);
    EXPECT_DOUBLE_EQ(s.iou, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.dice, 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(s.accuracy, 15.0 / 16.0);
}

TEST(SegScores, DiceIouIdentity) {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const BinaryMask pred = oracles::random_mask(rng, 12, 12, rng.uniform_real(0.0, 0.6));
        const BinaryMask gt = oracles::random_mask(rng, 12, 12, rng.uniform_real(0.0, 0.6));
        const SegScores s = seg_scores(pred, gt);
        ASSERT_NEAR(s.dice, 2.0 * s.iou / (1.0 + s.iou), 1e-12);
        ASSERT_LE(s.iou, s.dice + 1e-15);
    }
}

TEST(SegScores, DimensionMismatchThrows) {
    BinaryMask a(4, 4), b(4, 5);
    EXPECT_THROW(seg_scores(a, b), DimensionError);
}

TEST(AccumulatedDice, SinglePairEqualsOrdinaryDice) {
    Rng rng(11);
    const BinaryMask pred = oracles::random_mask(rng, 16, 16, 0.3);
    const BinaryMask gt = oracles::random_mask(rng, 16, 16, 0.3);
    const auto counts = dice_counts(pred, gt);
    const double acc = accumulated_dice({counts});
    EXPECT_NEAR(acc, seg_scores(pred, gt).dice, 1e-12);
}

TEST(AccumulatedDice, PerfectAndEmptyConventions) {
    // pred == gt with area A: I = A, U = 2A
    EXPECT_EQ(accumulated_dice({{50, 100}}), 1.0);
    // all predictions empty, truths not
    EXPECT_EQ(accumulated_dice({{0, 30}, {0, 50}}), 0.0);
    // nothing annotated anywhere
    EXPECT_EQ(accumulated_dice({{0, 0}, {0, 0}}), 1.0);
}

TEST(AccumulatedDice, PoolsCountsAcrossSequences) {
    const std::vector<std::pair<long long, long long>> pairs = {{10, 40}, {30, 60}};
    EXPECT_DOUBLE_EQ(accumulated_dice(pairs, DiceStyle::Doubled), 0.8);
    EXPECT_DOUBLE_EQ(accumulated_dice(pairs, DiceStyle::Literal), 0.4);
}

TEST(AccumulatedDice, RejectsNegativeOrInconsistentCounts) {
    EXPECT_THROW(accumulated_dice({{-1, 5}}), InputError);
    EXPECT_THROW(accumulated_dice({{10, 5}}), InputError);
}

TEST(Auc, EndpointConventions) {
    RocCurve diagonal;  // no swept points: just the virtual endpoints
    EXPECT_DOUBLE_EQ(auc(diagonal), 0.5);

    RocCurve perfect;
    perfect.points.push_back({0.5, 0.0, 1.0});
    EXPECT_DOUBLE_EQ(auc(perfect), 1.0);
}

TEST(Auc, HandComputedTrapezoids) {
    RocCurve curve;
    curve.points.push_back({0.2, 0.2, 0.6});
    curve.points.push_back({0.5, 0.5, 0.9});
    const double expected = (0.2 - 0.0) * (0.0 + 0.6) / 2.0 + (0.5 - 0.2) * (0.6 + 0.9) / 2.0 +
                            (1.0 - 0.5) * (0.9 + 1.0) / 2.0;
    EXPECT_EQ(auc(curve), expected);
    EXPECT_NEAR(auc(curve), 0.76, 1e-12);
}

TEST(Auc, UnsortedPointsAreSortedByFpr) {
    RocCurve curve;
    curve.points.push_back({0.9, 0.5, 0.9});
    curve.points.push_back({0.1, 0.2, 0.6});
    EXPECT_NEAR(auc(curve), 0.76, 1e-12);
}

TEST(Auc, RejectsOutOfRangeRates) {
    RocCurve curve;
    curve.points.push_back({0.5, 1.2, 0.4});
    EXPECT_THROW(auc(curve), InputError);
}

TEST(DefaultThresholdSweep, SeventeenValues) {
    const auto sweep = default_threshold_sweep();
    ASSERT_EQ(sweep.size(), 17u);
    EXPECT_NEAR(sweep.front(), 0.10, 1e-12);
    EXPECT_NEAR(sweep.back(), 0.90, 1e-12);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        EXPECT_NEAR(sweep[i] - sweep[i - 1], 0.05, 1e-12);
    }
}

namespace {

// tiny sequences whose mean intensity encodes a "drop score" in [0,1];
// the fake detector thresholds that score directly
std::vector<SequenceSample> scored_samples() {
    std::vector<SequenceSample> samples;
    const double scores[] = {0.95, 0.85, 0.7, 0.3, 0.2, 0.05};
    const bool labels[] = {true, true, true, false, false, false};
    for (int i = 0; i < 6; ++i) {
        SequenceSample s;
        s.has_drops = labels[i];
        s.seq.source_id = "fake-" + std::to_string(i);
        s.seq.frames.push_back(
            GrayImage(2, 2, static_cast<std::uint8_t>(std::lround(scores[i] * 255))));
        samples.push_back(std::move(s));
    }
    return samples;
}

SweepDetector score_detector() {
    return [](const FrameSequence& seq, double t) {
        const double score = seq.frames[0].at(0, 0) / 255.0;
        return SweepDetection{score > t, score};
    };
}

}  // namespace

TEST(RocSweep, SeparableScoresGivePerfectAuc) {
    const auto samples = scored_samples();
    const SweepResult result = roc_sweep(samples, score_detector(), default_threshold_sweep());
    ASSERT_EQ(result.curve.points.size(), 17u);
    ASSERT_EQ(result.detections.size(), 17u);
    ASSERT_EQ(result.detections[0].size(), samples.size());
    EXPECT_DOUBLE_EQ(auc(result.curve), 1.0);
    // at t = 0.5: exactly the three positives fire
    const RocPoint& mid = result.curve.points[8];
    EXPECT_NEAR(mid.threshold, 0.5, 1e-12);
    EXPECT_EQ(mid.tpr, 1.0);
    EXPECT_EQ(mid.fpr, 0.0);
}

TEST(RocSweep, AlwaysFiringDetectorIsChance) {
    const auto samples = scored_samples();
    const SweepDetector fire_all = [](const FrameSequence&, double) {
        return SweepDetection{true, 1.0};
    };
    const SweepResult result = roc_sweep(samples, fire_all, default_threshold_sweep());
    for (const RocPoint& p : result.curve.points) {
        EXPECT_EQ(p.tpr, 1.0);
        EXPECT_EQ(p.fpr, 1.0);
    }
    EXPECT_DOUBLE_EQ(auc(result.curve), 0.5);
}

TEST(RocSweep, RequiresBothClasses) {
    std::vector<SequenceSample> positives_only(2);
    for (auto& s : positives_only) {
        s.has_drops = true;
        s.seq.frames.push_back(GrayImage(2, 2, 1));
    }
    EXPECT_THROW(roc_sweep(positives_only, score_detector(), default_threshold_sweep()),
                 InputError);
}

TEST(RocSweep, RejectsBadThresholds) {
    const auto samples = scored_samples();
    EXPECT_THROW(roc_sweep(samples, score_detector(), {}), ParameterError);
    EXPECT_THROW(roc_sweep(samples, score_detector(), {0.5, 1.5}), ParameterError);
}

TEST(BenchPipeline, ProducesFiniteTimings) {
    Rng rng(13);
    FrameSequence seq;
    for (int i = 0; i < 3; ++i) seq.frames.push_back(oracles::random_image(rng, 32, 32));
    DetectorParams grad;
    grad.gaussian_size = KernelSize(9);
    grad.dilate_size = KernelSize(5);
    const BenchReport report = bench_pipeline(seq, grad, NccParams{}, 1);
    EXPECT_GT(report.gradient_total_ms, 0.0);
    EXPECT_GT(report.ncc_total_ms, 0.0);
    ASSERT_EQ(report.gradient_stages.size(), 4u);
    EXPECT_GT(report.stage_sum_ms, 0.0);
    EXPECT_EQ(report.repeats, 1);
    EXPECT_GE(report.threads, 1);
}

TEST(BenchPipeline, RejectsZeroRepeats) {
    FrameSequence seq;
    seq.frames.push_back(GrayImage(8, 8, 1));
    seq.frames.push_back(GrayImage(8, 8, 2));
    EXPECT_THROW(bench_pipeline(seq, DetectorParams{}, NccParams{}, 0), ParameterError);
}
