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
#include <cmath>

#include "raindrop/detector.hpp"
#include "raindrop/image.hpp"
#include "raindrop/kernels.hpp"

// Correlation-based baseline detector: static scene regions keep a high
// windowed correlation between consecutive frames, so pixels whose mean
// correlation stays above a threshold are flagged as artifacts. Windowed
// moments come from the box filter, so the cost is independent of the
// window size.

namespace raindrop {

struct NccParams {
    KernelSize window{11};
    double eps = 1e-4;  // variance stabilizer on [0,1]-scaled intensities
    double corr_threshold = 0.8;
    double detect_threshold = 0.1;
};

inline void validate_params(const NccParams& p) {
    if (!(p.eps > 0.0)) throw ParameterError("ncc eps must be positive");
    if (!(p.corr_threshold >= -1.0 && p.corr_threshold <= 1.0)) {
        throw ParameterError("ncc correlation threshold must be in [-1,1]");
    }
    if (!(p.detect_threshold >= 0.0 && p.detect_threshold <= 1.0)) {
        throw ParameterError("ncc detect threshold must be in [0,1]");
    }
}

/// Per-pixel windowed Pearson correlation between two frames:
/// (E[ab] - E[a]E[b]) / sqrt((Var[a]+eps)(Var[b]+eps)), clamped to [-1,1].
/// Intensities are scaled to [0,1] first so eps is resolution-independent.
inline ScalarMap ncc_map(const GrayImage& a, const GrayImage& b, KernelSize window,
                         double eps = 1e-4) {
    if (!a.same_size(b)) {
        throw DimensionError("ncc_map: image dimensions differ, " + std::to_string(a.width()) +
                             "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                             "x" + std::to_string(b.height()));
    }
    if (a.empty()) throw InputError("ncc_map: empty images");
    if (!(eps > 0.0)) throw ParameterError("ncc_map: eps must be positive");

    const int w = a.width();
    const int h = a.height();
    ScalarMap sa(w, h);
    ScalarMap sb(w, h);
    ScalarMap sab(w, h);
    ScalarMap saa(w, h);
    ScalarMap sbb(w, h);
    constexpr double kScale = 1.0 / 255.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double va = a.data()[i] * kScale;
        const double vb = b.data()[i] * kScale;
        sa.data()[i] = va;
        sb.data()[i] = vb;
        sab.data()[i] = va * vb;
        saa.data()[i] = va * va;
        sbb.data()[i] = vb * vb;
    }

    const ScalarMap mean_a = box_filter(sa, window);
    const ScalarMap mean_b = box_filter(sb, window);
    const ScalarMap mean_ab = box_filter(sab, window);
    const ScalarMap mean_aa = box_filter(saa, window);
    const ScalarMap mean_bb = box_filter(sbb, window);

    ScalarMap out(w, h);
    detail::parallel_rows(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* ma = mean_a.row(y);
            const double* mb = mean_b.row(y);
            const double* mab = mean_ab.row(y);
            const double* maa = mean_aa.row(y);
            const double* mbb = mean_bb.row(y);
            double* o = out.row(y);
            for (int x = 0; x < w; ++x) {
                const double cov = mab[x] - ma[x] * mb[x];
                const double var_a = maa[x] - ma[x] * ma[x];
                const double var_b = mbb[x] - mb[x] * mb[x];
                const double v = cov / std::sqrt((var_a + eps) * (var_b + eps));
                o[x] = std::clamp(v, -1.0, 1.0);
            }
        }
    });
    return out;
}

/// Mean correlation over the N-1 consecutive pairs; pixels at or above
/// corr_threshold are flagged, and the sequence is classified by the
/// flagged-area fraction exactly like the gradient detector.
inline DetectionResult ncc_detect(const FrameSequence& seq, const NccParams& params) {
    validate_params(params);
    validate_sequence(seq);
    if (seq.frame_count() < 2) {
        throw InputError("ncc_detect: need at least 2 frames, got " +
                         std::to_string(seq.frame_count()));
    }
    ScalarMap mean_corr(seq.width(), seq.height(), 0.0);
    const std::size_t pairs = seq.frame_count() - 1;
    for (std::size_t i = 0; i + 1 < seq.frame_count(); ++i) {
        const ScalarMap corr = ncc_map(seq.frames[i], seq.frames[i + 1], params.window, params.eps);
        double* acc = mean_corr.data().data();
        const double* c = corr.data().data();
        for (std::size_t k = 0; k < mean_corr.size(); ++k) acc[k] += c[k];
    }
    const double inv = 1.0 / static_cast<double>(pairs);
    for (double& v : mean_corr.data()) v *= inv;

    DetectionResult result;
    result.averaged_gradient = mean_corr;  // diagnostic map slot: mean correlation here
    result.mask = BinaryMask(seq.width(), seq.height());
    for (std::size_t i = 0; i < mean_corr.size(); ++i) {
        result.mask.data()[i] = mean_corr.data()[i] >= params.corr_threshold ? 1 : 0;
    }
    result.artifact_fraction = artifact_fraction(result.mask);
    result.detected = result.artifact_fraction > params.detect_threshold;
    return result;
}

}  // namespace raindrop
