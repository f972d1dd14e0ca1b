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

#include <string>
#include <utility>
#include <vector>

#include "raindrop/image.hpp"
#include "raindrop/kernels.hpp"

// Gradient-based raindrop detection over an image sequence.
//
// A raindrop adhering to the lens stays put and blurs whatever is behind
// it, so across a sequence its pixels keep a low gradient magnitude while
// the moving scene keeps producing edges everywhere else. The detector
// averages per-frame Sobel gradient magnitudes, smooths the averaged map,
// flags the low-gradient pixels by inverse binarization, and dilates the
// result back to drop size. A sequence is classified as "has raindrops"
// when the flagged area exceeds a fraction of the frame.

namespace raindrop {

/// Ordered frames of equal dimensions, N >= 1.
struct FrameSequence {
    std::vector<GrayImage> frames;
    std::string source_id;

    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }
    std::size_t frame_count() const { return frames.size(); }
};

inline void validate_sequence(const FrameSequence& seq) {
    if (seq.frames.empty()) {
        throw InputError("frame sequence '" + seq.source_id + "' is empty");
    }
    const GrayImage& first = seq.frames.front();
    if (first.empty()) throw InputError("frame sequence contains an empty frame");
    for (std::size_t i = 1; i < seq.frames.size(); ++i) {
        if (!first.same_size(seq.frames[i])) {
            throw DimensionError("frame " + std::to_string(i) + " is " +
                                 std::to_string(seq.frames[i].width()) + "x" +
                                 std::to_string(seq.frames[i].height()) + " but frame 0 is " +
                                 std::to_string(first.width()) + "x" +
                                 std::to_string(first.height()));
        }
    }
}

/// Pipeline parameters; defaults reproduce the tuned operating point
/// (Gaussian 271, dilation 91, binarization 0.18, detection 0.1, Sobel 5).
struct DetectorParams {
    KernelSize sobel_aperture{5};
    KernelSize gaussian_size{271};
    double binarize_threshold = 0.18;  // fraction of the map maximum
    KernelSize dilate_size{91};
    double detect_threshold = 0.1;  // flagged-area fraction that signals drops
};

inline void validate_params(const DetectorParams& p) {
    if (p.sobel_aperture.size() != 3 && p.sobel_aperture.size() != 5) {
        throw ParameterError("sobel aperture must be 3 or 5");
    }
    if (!(p.binarize_threshold >= 0.0 && p.binarize_threshold <= 1.0)) {
        throw ParameterError("binarize threshold must be in [0,1]");
    }
    if (!(p.detect_threshold >= 0.0 && p.detect_threshold <= 1.0)) {
        throw ParameterError("detect threshold must be in [0,1]");
    }
}

/// Rescale the size-dependent kernels (Gaussian, dilation) for inputs whose
/// min side differs from the resolution the defaults were tuned at.
inline DetectorParams scale_params(DetectorParams base, int target_side, int reference_side) {
    base.gaussian_size = scale_kernel(base.gaussian_size, target_side, reference_side);
    base.dilate_size = scale_kernel(base.dilate_size, target_side, reference_side);
    return base;
}

struct DetectionResult {
    bool detected = false;
    double artifact_fraction = 0.0;
    BinaryMask mask;
    ScalarMap averaged_gradient;
};

/// Pixel-wise mean of per-frame Sobel gradient magnitudes. Frames are
/// accumulated in order so results do not depend on thread count.
inline ScalarMap averaged_gradient(const FrameSequence& seq, KernelSize aperture) {
    validate_sequence(seq);
    ScalarMap acc(seq.width(), seq.height(), 0.0);
    for (const GrayImage& frame : seq.frames) {
        auto [gx, gy] = sobel_gradients(frame, aperture);
        const ScalarMap mag = gradient_magnitude(gx, gy);
        double* a = acc.data().data();
        const double* m = mag.data().data();
        for (std::size_t i = 0; i < acc.size(); ++i) a[i] += m[i];
    }
    const double inv_n = 1.0 / static_cast<double>(seq.frame_count());
    for (double& v : acc.data()) v *= inv_n;
    return acc;
}

/// Full segmentation pipeline: averaged gradient -> Gaussian blur ->
/// inverse binarization -> dilation. Exactly this composition, no hidden
/// rescaling between stages.
inline BinaryMask segment(const FrameSequence& seq, const DetectorParams& params) {
    validate_params(params);
    const ScalarMap averaged = averaged_gradient(seq, params.sobel_aperture);
    const ScalarMap blurred = gaussian_blur(averaged, params.gaussian_size);
    const BinaryMask binarized = threshold_inverse(blurred, params.binarize_threshold);
    return dilate(binarized, params.dilate_size);
}

inline double artifact_fraction(const BinaryMask& mask) {
    return static_cast<double>(count_true(mask)) / static_cast<double>(mask.size());
}

/// Segmentation plus the presence decision. detected is strict:
/// the flagged fraction must exceed detect_threshold.
inline DetectionResult detect(const FrameSequence& seq, const DetectorParams& params) {
    validate_params(params);
    DetectionResult result;
    result.averaged_gradient = averaged_gradient(seq, params.sobel_aperture);
    const ScalarMap blurred = gaussian_blur(result.averaged_gradient, params.gaussian_size);
    const BinaryMask binarized = threshold_inverse(blurred, params.binarize_threshold);
    result.mask = dilate(binarized, params.dilate_size);
    result.artifact_fraction = artifact_fraction(result.mask);
    result.detected = result.artifact_fraction > params.detect_threshold;
    return result;
}

}  // namespace raindrop
