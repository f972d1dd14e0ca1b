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

#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "raindrop/detector.hpp"
#include "raindrop/image.hpp"
#include "raindrop/ncc.hpp"
#include "raindrop/parallel.hpp"

// Metrics and experiment protocols: segmentation scores, accumulated Dice
// for parameter selection, ROC sweep over the binarization threshold, AUC,
// and timing comparisons between the two detectors.

namespace raindrop {

struct SegScores {
    double iou = 0.0;
    double dice = 0.0;
    double accuracy = 0.0;
};

/// TP/FP/FN/TN over the artifact class. Empty-vs-empty scores 1.0 so clean
/// sequences with correct empty predictions are not penalized.
inline SegScores seg_scores(const BinaryMask& pred, const BinaryMask& gt) {
    if (!pred.same_size(gt)) {
        throw DimensionError("seg_scores: mask dimensions differ, " + std::to_string(pred.width()) +
                             "x" + std::to_string(pred.height()) + " vs " +
                             std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
    }
    if (pred.empty()) throw InputError("seg_scores: empty masks");
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data()[i] != 0;
        const bool g = gt.data()[i] != 0;
        if (p && g) ++tp;
        else if (p && !g) ++fp;
        else if (!p && g) ++fn;
        else ++tn;
    }
    SegScores scores;
    const long long denom = tp + fp + fn;
    scores.iou = denom == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(denom);
    scores.dice = denom == 0 ? 1.0
                             : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    scores.accuracy = static_cast<double>(tp + tn) / static_cast<double>(pred.size());
    return scores;
}

/// Intersection and area-sum counts (|pred ∩ gt|, |pred| + |gt|) for one
/// mask pair, the inputs to accumulated_dice.
inline std::pair<long long, long long> dice_counts(const BinaryMask& pred, const BinaryMask& gt) {
    if (!pred.same_size(gt)) {
        throw DimensionError("dice_counts: mask dimensions differ");
    }
    long long intersection = 0, area_sum = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data()[i] != 0;
        const bool g = gt.data()[i] != 0;
        if (p && g) ++intersection;
        area_sum += (p ? 1 : 0) + (g ? 1 : 0);
    }
    return {intersection, area_sum};
}

/// Doubled (so a perfect prediction scores 1.0 and a single pair reduces to
/// ordinary Dice) or Literal (plain sum(I)/sum(U), peaking at 0.5).
enum class DiceStyle {
    Doubled,
    Literal,
};

/// Dataset-level Dice from per-sequence (intersection, area-sum) counts.
/// An all-empty dataset (sum U == 0) scores 1.0.
inline double accumulated_dice(const std::vector<std::pair<long long, long long>>& pairs,
                               DiceStyle style = DiceStyle::Doubled) {
    long long sum_i = 0, sum_u = 0;
    for (const auto& [i, u] : pairs) {
        if (i < 0 || u < i) {
            throw InputError("accumulated_dice: counts must satisfy 0 <= I <= U");
        }
        sum_i += i;
        sum_u += u;
    }
    if (sum_u == 0) return 1.0;
    const double factor = style == DiceStyle::Doubled ? 2.0 : 1.0;
    return std::clamp(factor * static_cast<double>(sum_i) / static_cast<double>(sum_u), 0.0, 1.0);
}

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // in sweep order
};

/// A loaded sequence with its ground-truth class label.
struct SequenceSample {
    FrameSequence seq;
    bool has_drops = false;
};

struct SweepDetection {
    bool detected = false;
    double fraction = 0.0;
};

/// Detector under sweep: given a sequence and the swept threshold, return
/// the decision and the flagged-area fraction.
using SweepDetector = std::function<SweepDetection(const FrameSequence&, double)>;

/// The binarization-threshold grid 0.10, 0.15, ..., 0.90.
inline std::vector<double> default_threshold_sweep() {
    std::vector<double> values;
    values.reserve(17);
    for (int i = 0; i <= 16; ++i) values.push_back(0.10 + 0.05 * i);
    return values;
}

struct SweepResult {
    RocCurve curve;
    // detections[t][s]: sample s at thresholds[t], same order as the inputs
    std::vector<std::vector<SweepDetection>> detections;
};

/// Classify every sample at every threshold; TPR/FPR per threshold. Both
/// classes must be present, otherwise the rates are undefined.
inline SweepResult roc_sweep(const std::vector<SequenceSample>& samples,
                             const SweepDetector& detector,
                             const std::vector<double>& thresholds) {
    if (thresholds.empty()) throw ParameterError("roc_sweep: no thresholds given");
    for (double t : thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ParameterError("roc_sweep: threshold " + std::to_string(t) + " outside [0,1]");
        }
    }
    long long positives = 0, negatives = 0;
    for (const auto& s : samples) {
        (s.has_drops ? positives : negatives)++;
    }
    if (positives == 0 || negatives == 0) {
        throw InputError("roc_sweep: need sequences of both classes, got " +
                         std::to_string(positives) + " with drops and " +
                         std::to_string(negatives) + " without");
    }

    SweepResult result;
    result.detections.reserve(thresholds.size());
    for (double t : thresholds) {
        std::vector<SweepDetection> row;
        row.reserve(samples.size());
        long long tp = 0, fp = 0;
        for (const auto& sample : samples) {
            const SweepDetection d = detector(sample.seq, t);
            if (d.detected) {
                (sample.has_drops ? tp : fp)++;
            }
            row.push_back(d);
        }
        RocPoint point;
        point.threshold = t;
        point.tpr = static_cast<double>(tp) / static_cast<double>(positives);
        point.fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        result.curve.points.push_back(point);
        result.detections.push_back(std::move(row));
    }
    return result;
}

/// Ready-made sweep detectors for the two algorithms.
inline SweepDetector gradient_sweep_detector(const DetectorParams& base) {
    return [base](const FrameSequence& seq, double t) {
        DetectorParams params = base;
        params.binarize_threshold = t;
        const DetectionResult r = detect(seq, params);
        return SweepDetection{r.detected, r.artifact_fraction};
    };
}

inline SweepDetector ncc_sweep_detector(const NccParams& base) {
    return [base](const FrameSequence& seq, double t) {
        NccParams params = base;
        params.corr_threshold = t;
        const DetectionResult r = ncc_detect(seq, params);
        return SweepDetection{r.detected, r.artifact_fraction};
    };
}

/// Trapezoidal area under the curve, points sorted by FPR (ties by TPR),
/// virtual endpoints (0,0) and (1,1) included.
inline double auc(const RocCurve& curve) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.points.size() + 2);
    pts.emplace_back(0.0, 0.0);
    for (const RocPoint& p : curve.points) {
        if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0)) {
            throw InputError("auc: rates must lie in [0,1]");
        }
        pts.emplace_back(p.fpr, p.tpr);
    }
    pts.emplace_back(1.0, 1.0);
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
    }
    return area;
}

struct StageTiming {
    std::string name;
    double median_ms = 0.0;
};

struct BenchReport {
    double gradient_total_ms = 0.0;  // median of full segment() runs
    double ncc_total_ms = 0.0;       // median of full ncc_detect() runs
    std::vector<StageTiming> gradient_stages;
    double stage_sum_ms = 0.0;  // sum of the stage medians
    int repeats = 0;
    int threads = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Wall-clock medians over `repeats` runs of both detectors on the same
/// input, plus a per-stage breakdown of the gradient pipeline. The worker
/// thread count in effect is recorded in the report.
inline BenchReport bench_pipeline(const FrameSequence& seq, const DetectorParams& gradient_params,
                                  const NccParams& ncc_params, int repeats) {
    if (repeats < 1) throw ParameterError("bench_pipeline: repeats must be >= 1");
    validate_sequence(seq);
    validate_params(gradient_params);
    validate_params(ncc_params);

    const char* stage_names[] = {"averaged_gradient", "gaussian_blur", "threshold_inverse",
                                 "dilate"};
    std::vector<std::vector<double>> stage_samples(4);
    std::vector<double> total_samples, ncc_samples;

    for (int rep = 0; rep < repeats; ++rep) {
        detail::StopWatch watch;
        const ScalarMap averaged = averaged_gradient(seq, gradient_params.sobel_aperture);
        stage_samples[0].push_back(watch.lap_ms());
        const ScalarMap blurred = gaussian_blur(averaged, gradient_params.gaussian_size);
        stage_samples[1].push_back(watch.lap_ms());
        const BinaryMask binarized =
            threshold_inverse(blurred, gradient_params.binarize_threshold);
        stage_samples[2].push_back(watch.lap_ms());
        const BinaryMask mask = dilate(binarized, gradient_params.dilate_size);
        stage_samples[3].push_back(watch.lap_ms());

        watch.lap_ms();
        const BinaryMask full = segment(seq, gradient_params);
        total_samples.push_back(watch.lap_ms());

        watch.lap_ms();
        const DetectionResult ncc_result = ncc_detect(seq, ncc_params);
        ncc_samples.push_back(watch.lap_ms());
        (void)mask;
        (void)full;
        (void)ncc_result;
    }

    BenchReport report;
    report.repeats = repeats;
    report.threads = worker_threads();
    report.gradient_total_ms = detail::median(total_samples);
    report.ncc_total_ms = detail::median(ncc_samples);
    for (int i = 0; i < 4; ++i) {
        report.gradient_stages.push_back({stage_names[i], detail::median(stage_samples[i])});
        report.stage_sum_ms += report.gradient_stages.back().median_ms;
    }
    return report;
}

}  // namespace raindrop
