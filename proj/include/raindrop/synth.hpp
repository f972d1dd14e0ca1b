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

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "raindrop/geometry.hpp"
#include "raindrop/image.hpp"
#include "raindrop/kernels.hpp"
#include "raindrop/rng.hpp"

// Synthetic raindrop rendering for data augmentation. A drop is an alpha
// map (circle, egg, or Bezier lens shape, blurred at the edges) used to
// composite a blurred, barrel-distorted crop of the background back onto
// itself in two passes: first darkened (leaves a dark rim where the alpha
// falls off), then at full brightness (restores the drop core).

namespace raindrop {

enum class DropShape : int {
    Circle = 0,
    Egg = 1,
    Bezier = 2,
};

/// Everything needed to render one drop reproducibly.
struct DropSpec {
    DropShape shape = DropShape::Circle;
    int radius = 10;
    int center_x = 0;
    int center_y = 0;
    int alpha_brightness = 255;  // 0 transparent .. 255 opaque
    KernelSize alpha_blur{1};
    KernelSize patch_blur{1};
    double fisheye_strength = 0.0;
    double darken_factor = 0.3;
};

/// Batch generation envelope; all sampling is driven by the seed.
struct SynthConfig {
    int drops_min = 1;
    int drops_max = 3;
    int r_min = 10;
    int r_max = 30;
    int brightness_min = 160;
    int brightness_max = 255;
    std::uint64_t seed = 0;
};

inline void validate_config(const SynthConfig& c) {
    if (c.drops_min < 1 || c.drops_max < c.drops_min) {
        throw ParameterError("synth: drops-per-image range invalid");
    }
    if (c.r_min < 1 || c.r_max < c.r_min) {
        throw ParameterError("synth: radius range invalid");
    }
    if (c.brightness_min < 0 || c.brightness_max > 255 || c.brightness_max < c.brightness_min) {
        throw ParameterError("synth: brightness range invalid");
    }
}

/// Transparency map for one drop: a (5R x 4R) field, zero outside the
/// shape, `brightness` inside, then Gaussian-blurred and re-quantized to
/// integer levels 0..255.
inline ScalarMap make_alpha_map(DropShape shape, int r, int brightness, KernelSize blur) {
    if (r < 1) throw ParameterError("make_alpha_map: radius must be >= 1");
    if (brightness < 0 || brightness > 255) {
        throw ParameterError("make_alpha_map: brightness must be in [0,255]");
    }
    const int w = 5 * r;
    const int h = 4 * r;
    const double cx = w / 2.0;
    const double cy = h / 2.0;
    const double rr = static_cast<double>(r);

    ScalarMap alpha(w, h, 0.0);
    switch (shape) {
        case DropShape::Circle: {
            for (int y = 0; y < h; ++y) {
                const double dy = (y + 0.5) - cy;
                for (int x = 0; x < w; ++x) {
                    const double dx = (x + 0.5) - cx;
                    if (dx * dx + dy * dy <= rr * rr) alpha.at(x, y) = brightness;
                }
            }
            break;
        }
        case DropShape::Egg: {
            // lower half: disc of radius R; upper half: semi-ellipse
            // stretched to 1.4R vertically
            const double b = 1.4 * rr;
            for (int y = 0; y < h; ++y) {
                const double dy = (y + 0.5) - cy;
                for (int x = 0; x < w; ++x) {
                    const double dx = (x + 0.5) - cx;
                    const bool inside =
                        dy > 0.0 ? (dx * dx + dy * dy <= rr * rr)
                                 : ((dx * dx) / (rr * rr) + (dy * dy) / (b * b) <= 1.0);
                    if (inside) alpha.at(x, y) = brightness;
                }
            }
            break;
        }
        case DropShape::Bezier: {
            // region between two cubic curves sharing endpoints at
            // (cx -/+ R, cy), control points pulled 1.2R up resp. down
            const double pull = 1.2 * rr;
            const int segments = 48;
            std::vector<PointF> poly;
            poly.reserve(2 * segments + 2);
            const auto cubic = [](double p0, double p1, double p2, double p3, double t) {
                const double u = 1.0 - t;
                return u * u * u * p0 + 3.0 * u * u * t * p1 + 3.0 * u * t * t * p2 + t * t * t * p3;
            };
            const double x0 = cx - rr, x3 = cx + rr;
            const double x1 = cx - rr / 3.0, x2 = cx + rr / 3.0;
            for (int i = 0; i <= segments; ++i) {  // upper curve, left to right
                const double t = static_cast<double>(i) / segments;
                poly.push_back({cubic(x0, x1, x2, x3, t), cubic(cy, cy - pull, cy - pull, cy, t)});
            }
            for (int i = segments - 1; i > 0; --i) {  // lower curve, right to left
                const double t = static_cast<double>(i) / segments;
                poly.push_back({cubic(x0, x1, x2, x3, t), cubic(cy, cy + pull, cy + pull, cy, t)});
            }
            BinaryMask region(w, h);
            fill_polygon_evenodd(poly, region);
            for (std::size_t i = 0; i < region.size(); ++i) {
                if (region.data()[i]) alpha.data()[i] = brightness;
            }
            break;
        }
    }

    if (blur.size() > 1) {
        alpha = gaussian_blur(alpha, blur);
        for (double& v : alpha.data()) {
            double q = std::floor(v + 0.5);
            v = q < 0.0 ? 0.0 : (q > 255.0 ? 255.0 : q);
        }
    }
    return alpha;
}

/// Barrel (fish-eye) remap about the patch center:
/// r_src = r_dst * (1 + strength * (r_dst / r_max)^2), bilinear sampling.
inline GrayImage fisheye(const GrayImage& patch, double strength) {
    if (patch.empty()) throw InputError("fisheye: empty patch");
    if (strength < 0.0) throw ParameterError("fisheye: strength must be non-negative");
    if (strength == 0.0) return patch;

    const int w = patch.width();
    const int h = patch.height();
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double r_max = std::sqrt(cx * cx + cy * cy);
    if (r_max == 0.0) return patch;

    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const double dy = y - cy;
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx;
            const double r = std::sqrt(dx * dx + dy * dy);
            const double factor = 1.0 + strength * (r / r_max) * (r / r_max);
            double sx = cx + dx * factor;
            double sy = cy + dy * factor;
            sx = sx < 0.0 ? 0.0 : (sx > w - 1 ? w - 1 : sx);
            sy = sy < 0.0 ? 0.0 : (sy > h - 1 ? h - 1 : sy);
            const int ix = static_cast<int>(sx);
            const int iy = static_cast<int>(sy);
            const int ix1 = ix + 1 < w ? ix + 1 : ix;
            const int iy1 = iy + 1 < h ? iy + 1 : iy;
            const double fx = sx - ix;
            const double fy = sy - iy;
            const double v = (1 - fx) * (1 - fy) * patch.at(ix, iy) +
                             fx * (1 - fy) * patch.at(ix1, iy) +
                             (1 - fx) * fy * patch.at(ix, iy1) + fx * fy * patch.at(ix1, iy1);
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
        }
    }
    return out;
}

namespace detail {

inline std::uint8_t blend(double alpha, std::uint8_t fg, std::uint8_t bg) {
    const double a = alpha / 255.0;
    const double v = a * fg + (1.0 - a) * bg;
    const long q = std::lround(v);
    return static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

inline GrayImage blur_gray(const GrayImage& img, KernelSize d) {
    if (d.size() == 1) return img;
    return to_gray_clamped(gaussian_blur(to_scalar(img), d));
}

}  // namespace detail

/// Render one drop onto the image. Returns the modified image and the
/// ground-truth mask (alpha > 127). Pixels outside the drop's patch
/// rectangle are untouched.
inline std::pair<GrayImage, BinaryMask> composite_drop(const GrayImage& img, const DropSpec& spec) {
    if (img.empty()) throw InputError("composite_drop: empty image");
    if (spec.radius < 1) throw ParameterError("composite_drop: radius must be >= 1");
    if (spec.alpha_brightness < 0 || spec.alpha_brightness > 255) {
        throw ParameterError("composite_drop: alpha brightness must be in [0,255]");
    }
    if (!(spec.darken_factor >= 0.0 && spec.darken_factor <= 1.0)) {
        throw ParameterError("composite_drop: darken factor must be in [0,1]");
    }
    if (spec.center_x < 0 || spec.center_x >= img.width() || spec.center_y < 0 ||
        spec.center_y >= img.height()) {
        throw ParameterError("composite_drop: center (" + std::to_string(spec.center_x) + "," +
                             std::to_string(spec.center_y) + ") outside image");
    }

    const int pw = 5 * spec.radius;
    const int ph = 4 * spec.radius;
    const int x0 = spec.center_x - pw / 2;
    const int y0 = spec.center_y - ph / 2;
    const int rx0 = x0 < 0 ? 0 : x0;
    const int ry0 = y0 < 0 ? 0 : y0;
    const int rx1 = x0 + pw > img.width() ? img.width() : x0 + pw;
    const int ry1 = y0 + ph > img.height() ? img.height() : y0 + ph;
    if (rx0 >= rx1 || ry0 >= ry1) {
        throw ParameterError("composite_drop: patch fully outside image");
    }
    const int cw = rx1 - rx0;
    const int ch = ry1 - ry0;
    const int ax_off = rx0 - x0;  // offset of the visible part inside the alpha map
    const int ay_off = ry0 - y0;

    const ScalarMap alpha =
        make_alpha_map(spec.shape, spec.radius, spec.alpha_brightness, spec.alpha_blur);

    GrayImage patch(cw, ch);
    for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) patch.at(x, y) = img.at(rx0 + x, ry0 + y);
    }
    const GrayImage bright = fisheye(detail::blur_gray(patch, spec.patch_blur),
                                     spec.fisheye_strength);
    GrayImage dark(cw, ch);
    for (std::size_t i = 0; i < dark.size(); ++i) {
        dark.data()[i] =
            static_cast<std::uint8_t>(std::lround(bright.data()[i] * spec.darken_factor));
    }

    GrayImage out = img;
    BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
            const double a = alpha.at(ax_off + x, ay_off + y);
            const int gx = rx0 + x;
            const int gy = ry0 + y;
            // dark rim pass, then the bright core on top of it
            const std::uint8_t rim = detail::blend(a, dark.at(x, y), out.at(gx, gy));
            out.at(gx, gy) = detail::blend(a, bright.at(x, y), rim);
            if (a > 127.0) mask.at(gx, gy) = 1;
        }
    }
    return {std::move(out), std::move(mask)};
}

struct SynthResult {
    GrayImage image;
    BinaryMask mask;
    std::vector<DropSpec> drops;
};

namespace detail {
inline KernelSize odd_kernel(int v) {
    if (v < 1) v = 1;
    return KernelSize(v % 2 == 0 ? v + 1 : v);
}
}  // namespace detail

/// Seeded batch generation: samples drop count and per-drop specs from the
/// config ranges and composites them in order. Identical seed and inputs
/// give bit-identical outputs. Drops whose visible mask area would be zero
/// after clipping are resampled.
inline SynthResult generate_drops(const GrayImage& img, const SynthConfig& config) {
    if (img.empty()) throw InputError("generate_drops: empty image");
    validate_config(config);

    Rng rng(config.seed);
    SynthResult result;
    result.image = img;
    result.mask = BinaryMask(img.width(), img.height());

    const int count = rng.uniform_int(config.drops_min, config.drops_max);
    for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            DropSpec spec;
            spec.shape = static_cast<DropShape>(rng.uniform_int(0, 2));
            spec.radius = rng.uniform_int(config.r_min, config.r_max);
            spec.center_x = rng.uniform_int(0, img.width() - 1);
            spec.center_y = rng.uniform_int(0, img.height() - 1);
            spec.alpha_brightness = rng.uniform_int(config.brightness_min, config.brightness_max);
            spec.alpha_blur = detail::odd_kernel(spec.radius / 2 < 3 ? 3 : spec.radius / 2);
            spec.patch_blur = detail::odd_kernel(spec.radius < 3 ? 3 : spec.radius);
            spec.fisheye_strength = rng.uniform_real(0.2, 0.6);

            auto [image, drop_mask] = composite_drop(result.image, spec);
            if (count_true(drop_mask) == 0) continue;
            result.image = std::move(image);
            for (std::size_t k = 0; k < result.mask.size(); ++k) {
                if (drop_mask.data()[k]) result.mask.data()[k] = 1;
            }
            result.drops.push_back(spec);
            placed = true;
        }
        if (!placed) {
            throw InputError("generate_drops: could not place a visible drop; "
                             "check brightness/radius ranges");
        }
    }
    return result;
}

}  // namespace raindrop
