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

#include <cstdint>
#include <string>
#include <vector>

#include "raindrop/errors.hpp"

namespace raindrop {

/// Row-major 2D grid with value semantics. The Tag parameter keeps
/// pixel containers with different meanings (intensities, gradient
/// magnitudes, mask bits) from being mixed up silently.
template <typename T, typename Tag>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw ParameterError("grid dimensions must be positive, got " +
                                 std::to_string(width) + "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    T& at(int x, int y) { return data_[index(x, y)]; }
    const T& at(int x, int y) const { return data_[index(x, y)]; }

    T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
    const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_size(const Grid& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    template <typename G>
    bool same_size_as(const G& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

namespace detail {
struct GrayTag {};
struct ScalarTag {};
struct MaskTag {};
}  // namespace detail

/// Single-channel raster, 8-bit intensities in [0,255].
using GrayImage = Grid<std::uint8_t, detail::GrayTag>;

/// Per-pixel floating-point field: gradient magnitudes (>= 0) or
/// correlation values (may be negative).
using ScalarMap = Grid<double, detail::ScalarTag>;

/// Per-pixel artifact/background labeling; nonzero = artifact.
using BinaryMask = Grid<std::uint8_t, detail::MaskTag>;

/// Interleaved 3-channel 8-bit raster, only used on the decode path.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // r,g,b per pixel, row-major

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h) {
        if (w <= 0 || h <= 0) {
            throw ParameterError("image dimensions must be positive");
        }
        data.assign(static_cast<std::size_t>(w) * h * 3, 0);
    }
};

/// Odd positive kernel extent. Constructing an invalid one throws, so a
/// KernelSize in hand is always usable.
class KernelSize {
public:
    KernelSize() = default;  // size 1 == identity kernel

    explicit KernelSize(int size) : size_(size) {
        if (size < 1 || size % 2 == 0) {
            throw ParameterError("kernel size must be odd and >= 1, got " +
                                 std::to_string(size));
        }
    }

    int size() const { return size_; }
    int radius() const { return size_ / 2; }

    friend bool operator==(KernelSize a, KernelSize b) { return a.size_ == b.size_; }

private:
    int size_ = 1;
};

/// Nearest odd kernel size to `value * num / den`, never below 1. Used to
/// carry kernel parameters tuned at one resolution over to another.
inline KernelSize scale_kernel(KernelSize base, int target_side, int reference_side) {
    if (target_side <= 0 || reference_side <= 0) {
        throw ParameterError("kernel scaling sides must be positive");
    }
    const double scaled = static_cast<double>(base.size()) * target_side / reference_side;
    int odd = 2 * static_cast<int>((scaled - 1.0) / 2.0 + 0.5) + 1;  // nearest odd
    if (odd < 1) odd = 1;
    return KernelSize(odd);
}

inline int count_true(const BinaryMask& mask) {
    int n = 0;
    for (std::uint8_t v : mask.data()) n += v ? 1 : 0;
    return n;
}

}  // namespace raindrop
