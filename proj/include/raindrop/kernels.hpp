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
#include <cstdint>
#include <utility>
#include <vector>

#include "raindrop/image.hpp"
#include "raindrop/parallel.hpp"

// Pixel-level kernels shared by the whole library. All filters use
// replicate (clamp-to-edge) borders and correlation orientation (no kernel
// flip); outputs are deterministic for any worker-thread setting.

namespace raindrop {

namespace detail {

inline int clamp_index(int i, int n) {
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

// out(x,y) = sum_k kern[k] * src(clamp(x+k-r), y)
template <typename T, typename Tag>
void correlate_rows(const Grid<T, Tag>& src, const std::vector<double>& kern, ScalarMap& out) {
    const int w = src.width();
    const int h = src.height();
    const int r = static_cast<int>(kern.size()) / 2;
    const int taps = static_cast<int>(kern.size());
    parallel_rows(h, [&](int y0, int y1) {
        std::vector<double> buf(static_cast<std::size_t>(w) + 2 * r);
        for (int y = y0; y < y1; ++y) {
            const T* in = src.row(y);
            for (int i = 0; i < r; ++i) buf[i] = static_cast<double>(in[0]);
            for (int x = 0; x < w; ++x) buf[r + x] = static_cast<double>(in[x]);
            for (int i = 0; i < r; ++i) buf[r + w + i] = static_cast<double>(in[w - 1]);
            double* o = out.row(y);
            for (int x = 0; x < w; ++x) {
                const double* b = buf.data() + x;
                double acc = 0.0;
                for (int k = 0; k < taps; ++k) acc += kern[k] * b[k];
                o[x] = acc;
            }
        }
    });
}

// out(x,y) = sum_k kern[k] * src(x, clamp(y+k-r))
inline void correlate_cols(const ScalarMap& src, const std::vector<double>& kern, ScalarMap& out) {
    const int w = src.width();
    const int h = src.height();
    const int r = static_cast<int>(kern.size()) / 2;
    const int taps = static_cast<int>(kern.size());
    parallel_rows(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            double* o = out.row(y);
            std::fill(o, o + w, 0.0);
            for (int k = 0; k < taps; ++k) {
                const double* in = src.row(clamp_index(y + k - r, h));
                const double wk = kern[k];
                for (int x = 0; x < w; ++x) o[x] += wk * in[x];
            }
        }
    });
}

}  // namespace detail

/// BT.601 luma from interleaved RGB.
inline GrayImage to_grayscale(const RgbImage& rgb) {
    if (rgb.width <= 0 || rgb.height <= 0) {
        throw InputError("to_grayscale: empty image");
    }
    if (rgb.data.size() != static_cast<std::size_t>(rgb.width) * rgb.height * 3) {
        throw DimensionError("to_grayscale: rgb buffer does not match dimensions");
    }
    GrayImage out(rgb.width, rgb.height);
    const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
    const std::uint8_t* p = rgb.data.data();
    std::uint8_t* o = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        const double luma = 0.299 * p[3 * i] + 0.587 * p[3 * i + 1] + 0.114 * p[3 * i + 2];
        long v = std::lround(luma);
        o[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    return out;
}

/// Planar variant; throws DimensionError when the channels disagree.
inline GrayImage to_grayscale(const GrayImage& red, const GrayImage& green, const GrayImage& blue) {
    if (!red.same_size(green) || !red.same_size(blue)) {
        throw DimensionError("to_grayscale: channel dimensions differ");
    }
    if (red.empty()) throw InputError("to_grayscale: empty channels");
    RgbImage rgb(red.width(), red.height());
    const std::size_t n = red.size();
    for (std::size_t i = 0; i < n; ++i) {
        rgb.data[3 * i] = red.data()[i];
        rgb.data[3 * i + 1] = green.data()[i];
        rgb.data[3 * i + 2] = blue.data()[i];
    }
    return to_grayscale(rgb);
}

namespace detail {

inline const std::vector<double>& sobel_smooth(int aperture) {
    static const std::vector<double> s3 = {1, 2, 1};
    static const std::vector<double> s5 = {1, 4, 6, 4, 1};
    return aperture == 3 ? s3 : s5;
}

inline const std::vector<double>& sobel_deriv(int aperture) {
    static const std::vector<double> d3 = {-1, 0, 1};
    static const std::vector<double> d5 = {-1, -2, 0, 2, 1};
    return aperture == 3 ? d3 : d5;
}

}  // namespace detail

/// Signed horizontal and vertical Sobel responses (raw integer-weight
/// kernels, aperture 3 or 5).
inline std::pair<ScalarMap, ScalarMap> sobel_gradients(const GrayImage& img, KernelSize aperture) {
    if (img.empty()) throw InputError("sobel_gradients: empty image");
    if (aperture.size() != 3 && aperture.size() != 5) {
        throw ParameterError("sobel_gradients: aperture must be 3 or 5, got " +
                             std::to_string(aperture.size()));
    }
    const auto& smooth = detail::sobel_smooth(aperture.size());
    const auto& deriv = detail::sobel_deriv(aperture.size());

    ScalarMap tmp(img.width(), img.height());
    ScalarMap gx(img.width(), img.height());
    ScalarMap gy(img.width(), img.height());

    detail::correlate_rows(img, deriv, tmp);
    detail::correlate_cols(tmp, smooth, gx);

    detail::correlate_rows(img, smooth, tmp);
    detail::correlate_cols(tmp, deriv, gy);

    return {std::move(gx), std::move(gy)};
}

/// Per-pixel sqrt(gx^2 + gy^2).
inline ScalarMap gradient_magnitude(const ScalarMap& gx, const ScalarMap& gy) {
    if (!gx.same_size(gy)) {
        throw DimensionError("gradient_magnitude: gx " + std::to_string(gx.width()) + "x" +
                             std::to_string(gx.height()) + " vs gy " + std::to_string(gy.width()) +
                             "x" + std::to_string(gy.height()));
    }
    if (gx.empty()) throw InputError("gradient_magnitude: empty maps");
    ScalarMap out(gx.width(), gx.height());
    detail::parallel_rows(gx.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* a = gx.row(y);
            const double* b = gy.row(y);
            double* o = out.row(y);
            for (int x = 0; x < gx.width(); ++x) {
                o[x] = std::sqrt(a[x] * a[x] + b[x] * b[x]);
            }
        }
    });
    return out;
}

/// Sigma tied to the kernel size so one parameter describes the blur.
inline double gaussian_sigma(KernelSize d) {
    return 0.3 * ((d.size() - 1) * 0.5 - 1.0) + 0.8;
}

/// Normalized 1D Gaussian weights for kernel size d.
inline std::vector<double> gaussian_kernel(KernelSize d) {
    const int n = d.size();
    std::vector<double> kern(n);
    if (n == 1) {
        kern[0] = 1.0;
        return kern;
    }
    const double sigma = gaussian_sigma(d);
    const double c = (n - 1) * 0.5;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        kern[i] = std::exp(-((i - c) * (i - c)) / (2.0 * sigma * sigma));
        sum += kern[i];
    }
    for (double& v : kern) v /= sum;
    return kern;
}

/// Separable Gaussian filter, replicate borders. d = 1 is the identity.
inline ScalarMap gaussian_blur(const ScalarMap& map, KernelSize d) {
    if (map.empty()) throw InputError("gaussian_blur: empty map");
    if (d.size() == 1) return map;
    const auto kern = gaussian_kernel(d);
    ScalarMap tmp(map.width(), map.height());
    ScalarMap out(map.width(), map.height());
    detail::correlate_rows(map, kern, tmp);
    detail::correlate_cols(tmp, kern, out);
    return out;
}

/// Marks the LOW end of the map: pixel is artifact iff value <= t * max(map).
/// A zero map therefore flags every pixel.
inline BinaryMask threshold_inverse(const ScalarMap& map, double t) {
    if (map.empty()) throw InputError("threshold_inverse: empty map");
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ParameterError("threshold_inverse: t must be in [0,1], got " + std::to_string(t));
    }
    double max_value = map.data()[0];
    for (double v : map.data()) max_value = std::max(max_value, v);
    const double cutoff = t * max_value;
    BinaryMask out(map.width(), map.height());
    const std::size_t n = map.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.data()[i] = map.data()[i] <= cutoff ? 1 : 0;
    }
    return out;
}

/// Morphological dilation with an m x m square structuring element,
/// decomposed into two 1D window-OR passes (exact, O(1) per pixel).
inline BinaryMask dilate(const BinaryMask& mask, KernelSize m) {
    if (mask.empty()) throw InputError("dilate: empty mask");
    if (m.size() == 1) return mask;
    const int w = mask.width();
    const int h = mask.height();
    const int r = m.radius();

    BinaryMask horiz(w, h);
    detail::parallel_rows(h, [&](int y0, int y1) {
        std::vector<int> pref(static_cast<std::size_t>(w) + 1);
        for (int y = y0; y < y1; ++y) {
            const std::uint8_t* in = mask.row(y);
            pref[0] = 0;
            for (int x = 0; x < w; ++x) pref[x + 1] = pref[x] + (in[x] ? 1 : 0);
            std::uint8_t* o = horiz.row(y);
            for (int x = 0; x < w; ++x) {
                const int lo = x - r < 0 ? 0 : x - r;
                const int hi = x + r >= w ? w - 1 : x + r;
                o[x] = pref[hi + 1] - pref[lo] > 0 ? 1 : 0;
            }
        }
    });

    // column prefix counts, built row by row
    std::vector<int> colpref(static_cast<std::size_t>(h + 1) * w, 0);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* in = horiz.row(y);
        const int* prev = colpref.data() + static_cast<std::size_t>(y) * w;
        int* cur = colpref.data() + static_cast<std::size_t>(y + 1) * w;
        for (int x = 0; x < w; ++x) cur[x] = prev[x] + (in[x] ? 1 : 0);
    }

    BinaryMask out(w, h);
    detail::parallel_rows(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const int lo = y - r < 0 ? 0 : y - r;
            const int hi = y + r >= h ? h - 1 : y + r;
            const int* plo = colpref.data() + static_cast<std::size_t>(lo) * w;
            const int* phi = colpref.data() + static_cast<std::size_t>(hi + 1) * w;
            std::uint8_t* o = out.row(y);
            for (int x = 0; x < w; ++x) o[x] = phi[x] - plo[x] > 0 ? 1 : 0;
        }
    });
    return out;
}

/// Windowed mean over a w x w replicate-padded window, via a summed-area
/// table so the cost does not depend on w.
inline ScalarMap box_filter(const ScalarMap& map, KernelSize w) {
    if (map.empty()) throw InputError("box_filter: empty map");
    if (w.size() == 1) return map;
    const int iw = map.width();
    const int ih = map.height();
    const int r = w.radius();
    const int pw = iw + 2 * r;
    const int ph = ih + 2 * r;

    std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const double* src = map.row(detail::clamp_index(y - r, ih));
        double* dst = padded.data() + static_cast<std::size_t>(y) * pw;
        for (int x = 0; x < pw; ++x) dst[x] = src[detail::clamp_index(x - r, iw)];
    }

    const int sw = pw + 1;
    std::vector<double> sat(static_cast<std::size_t>(sw) * (ph + 1), 0.0);
    for (int y = 0; y < ph; ++y) {
        const double* src = padded.data() + static_cast<std::size_t>(y) * pw;
        const double* above = sat.data() + static_cast<std::size_t>(y) * sw;
        double* cur = sat.data() + static_cast<std::size_t>(y + 1) * sw;
        double rowsum = 0.0;
        for (int x = 0; x < pw; ++x) {
            rowsum += src[x];
            cur[x + 1] = rowsum + above[x + 1];
        }
    }

    const int win = w.size();
    const double inv_area = 1.0 / (static_cast<double>(win) * win);
    ScalarMap out(iw, ih);
    detail::parallel_rows(ih, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* top = sat.data() + static_cast<std::size_t>(y) * sw;
            const double* bot = sat.data() + static_cast<std::size_t>(y + win) * sw;
            double* o = out.row(y);
            for (int x = 0; x < iw; ++x) {
                o[x] = (bot[x + win] - bot[x] - top[x + win] + top[x]) * inv_area;
            }
        }
    });
    return out;
}

/// Nearest-neighbor resampling; source index = floor((i + 0.5) * src / dst),
/// computed in integers.
inline GrayImage resize_nearest(const GrayImage& img, int w, int h) {
    if (img.empty()) throw InputError("resize_nearest: empty image");
    if (w <= 0 || h <= 0) {
        throw ParameterError("resize_nearest: target dimensions must be positive, got " +
                             std::to_string(w) + "x" + std::to_string(h));
    }
    if (w == img.width() && h == img.height()) return img;
    GrayImage out(w, h);
    std::vector<int> src_x(w);
    for (int x = 0; x < w; ++x) {
        const std::int64_t sx = (static_cast<std::int64_t>(2 * x + 1) * img.width()) / (2 * w);
        src_x[x] = detail::clamp_index(static_cast<int>(sx), img.width());
    }
    for (int y = 0; y < h; ++y) {
        const std::int64_t sy = (static_cast<std::int64_t>(2 * y + 1) * img.height()) / (2 * h);
        const std::uint8_t* in = img.row(detail::clamp_index(static_cast<int>(sy), img.height()));
        std::uint8_t* o = out.row(y);
        for (int x = 0; x < w; ++x) o[x] = in[src_x[x]];
    }
    return out;
}

/// Widen intensities to a double map (values stay 0..255).
inline ScalarMap to_scalar(const GrayImage& img) {
    if (img.empty()) throw InputError("to_scalar: empty image");
    ScalarMap out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        out.data()[i] = static_cast<double>(img.data()[i]);
    }
    return out;
}

/// Round a map back to 8-bit, clamping to [0,255].
inline GrayImage to_gray_clamped(const ScalarMap& map) {
    if (map.empty()) throw InputError("to_gray_clamped: empty map");
    GrayImage out(map.width(), map.height());
    for (std::size_t i = 0; i < map.size(); ++i) {
        const long v = std::lround(map.data()[i]);
        out.data()[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    return out;
}

/// Min-max scale a map onto [0,255] for viewing; constant maps go to 0.
inline GrayImage normalize_for_view(const ScalarMap& map) {
    if (map.empty()) throw InputError("normalize_for_view: empty map");
    double lo = map.data()[0], hi = map.data()[0];
    for (double v : map.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    GrayImage out(map.width(), map.height());
    if (hi > lo) {
        const double scale = 255.0 / (hi - lo);
        for (std::size_t i = 0; i < map.size(); ++i) {
            out.data()[i] = static_cast<std::uint8_t>(std::lround((map.data()[i] - lo) * scale));
        }
    }
    return out;
}

}  // namespace raindrop
