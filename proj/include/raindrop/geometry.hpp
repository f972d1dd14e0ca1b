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
#include <vector>

#include "raindrop/image.hpp"

namespace raindrop {

struct PointF {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

// Crossings of the horizontal line y = py with the polygon boundary,
// half-open in y so shared vertices count once.
inline std::vector<double> scanline_crossings(const std::vector<PointF>& poly, double py) {
    std::vector<double> xs;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PointF& a = poly[i];
        const PointF& b = poly[(i + 1) % n];
        if ((a.y <= py) != (b.y <= py)) {
            xs.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
        }
    }
    return xs;
}

}  // namespace detail

/// Even-odd test against the pixel grid: the center of pixel (x, y) is
/// (x + 0.5, y + 0.5). Marks centers inside the polygon into `mask`
/// (OR semantics, existing marks are kept).
inline void fill_polygon_evenodd(const std::vector<PointF>& poly, BinaryMask& mask) {
    if (poly.size() < 3) return;
    double ymin = poly[0].y, ymax = poly[0].y;
    for (const PointF& p : poly) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const int h = mask.height();
    const int w = mask.width();
    int y0 = static_cast<int>(std::floor(ymin - 0.5));
    int y1 = static_cast<int>(std::ceil(ymax));
    y0 = std::max(y0, 0);
    y1 = std::min(y1, h - 1);
    for (int y = y0; y <= y1; ++y) {
        const double py = y + 0.5;
        std::vector<double> xs = detail::scanline_crossings(poly, py);
        if (xs.empty()) continue;
        std::sort(xs.begin(), xs.end());
        std::uint8_t* row = mask.row(y);
        for (int x = 0; x < w; ++x) {
            const double px = x + 0.5;
            // parity of crossings strictly right of the center
            const auto it = std::upper_bound(xs.begin(), xs.end(), px);
            const std::size_t count_right = static_cast<std::size_t>(xs.end() - it);
            if (count_right & 1u) row[x] = 1;
        }
    }
}

/// Point-in-polygon by the same crossing rule the scanline fill uses.
inline bool point_in_polygon_evenodd(const std::vector<PointF>& poly, double px, double py) {
    if (poly.size() < 3) return false;
    const std::vector<double> xs = detail::scanline_crossings(poly, py);
    std::size_t count_right = 0;
    for (double x : xs) {
        if (x > px) ++count_right;
    }
    return (count_right & 1u) != 0;
}

}  // namespace raindrop
