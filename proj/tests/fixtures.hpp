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

// Synthetic sequence builders shared by the detector, evaluation, and
// acceptance tests. A "clean" fixture is i.i.d. noise sliding sideways a
// fixed number of pixels per frame (every region keeps producing fresh
// edges). A "drop" fixture additionally composites one synthetic raindrop
// at a fixed position in every frame: its heavily blurred interior is the
// static low-gradient region the detector is meant to find.

#include <cstdint>

#include "raindrop/detector.hpp"
#include "raindrop/image.hpp"
#include "raindrop/rng.hpp"
#include "raindrop/synth.hpp"

namespace fixtures {

inline raindrop::FrameSequence translating_noise_sequence(std::uint64_t seed, int width,
                                                          int height, int frames,
                                                          int step_px = 2) {
    raindrop::Rng rng(seed);
    const int canvas_w = width + step_px * (frames - 1);
    raindrop::GrayImage canvas(canvas_w, height);
    for (auto& v : canvas.data()) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));

    raindrop::FrameSequence seq;
    seq.source_id = "noise-" + std::to_string(seed);
    for (int f = 0; f < frames; ++f) {
        raindrop::GrayImage frame(width, height);
        const int off = f * step_px;
        for (int y = 0; y < height; ++y) {
            const std::uint8_t* src = canvas.row(y) + off;
            std::uint8_t* dst = frame.row(y);
            for (int x = 0; x < width; ++x) dst[x] = src[x];
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

struct DropFixture {
    raindrop::FrameSequence seq;
    raindrop::BinaryMask ground_truth;
    raindrop::DropSpec spec;
};

/// Sample a drop whose shape stays fully inside the frame.
inline raindrop::DropSpec sample_drop_spec(raindrop::Rng& rng, int width, int height,
                                           int r_min = 15, int r_max = 30) {
    raindrop::DropSpec spec;
    spec.shape = static_cast<raindrop::DropShape>(rng.uniform_int(0, 2));
    spec.radius = rng.uniform_int(r_min, r_max);
    const int margin = static_cast<int>(1.4 * spec.radius) + 3;
    spec.center_x = rng.uniform_int(margin, width - 1 - margin);
    spec.center_y = rng.uniform_int(margin, height - 1 - margin);
    spec.alpha_brightness = 255;
    spec.alpha_blur = raindrop::KernelSize(spec.radius / 2 * 2 + 1);
    spec.patch_blur = raindrop::KernelSize(2 * spec.radius + 1);
    spec.fisheye_strength = 0.3;
    return spec;
}

/// Translating noise with one static drop composited into every frame.
inline DropFixture drop_sequence_fixture(std::uint64_t seed, int width = 128, int height = 128,
                                         int frames = 10, int step_px = 2) {
    DropFixture fixture;
    fixture.seq = translating_noise_sequence(seed, width, height, frames, step_px);
    fixture.seq.source_id = "drop-" + std::to_string(seed);

    raindrop::Rng rng(seed * 7919 + 17);
    fixture.spec = sample_drop_spec(rng, width, height);
    for (auto& frame : fixture.seq.frames) {
        auto [image, mask] = raindrop::composite_drop(frame, fixture.spec);
        frame = std::move(image);
        fixture.ground_truth = std::move(mask);
    }
    return fixture;
}

}  // namespace fixtures
