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

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "raindrop/image.hpp"
#include "raindrop/kernels.hpp"

// PNG and JPEG codecs behind the library's raster types. Decoding always
// lands on 8-bit grayscale (color inputs go through to_grayscale); masks
// are written as single-channel PNG with 0 = background, 255 = artifact.

namespace raindrop {
namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return f;
}

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

inline GrayImage decode_png_gray(std::FILE* file, const std::string& path) {
    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw IoError("libpng init failed for '" + path + "'");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw IoError("libpng init failed for '" + path + "'");

    if (setjmp(png_jmpbuf(g.png))) {
        throw IoError("PNG decode failed for '" + path + "'");
    }
    png_init_io(g.png, file);
    png_set_sig_bytes(g.png, 8);
    png_read_info(g.png, g.info);

    png_set_strip_16(g.png);
    png_set_packing(g.png);
    const png_byte color = png_get_color_type(g.png, g.info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(g.png, g.info) < 8) {
        png_set_expand_gray_1_2_4_to_8(g.png);
    }
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
    png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);

    const int width = static_cast<int>(png_get_image_width(g.png, g.info));
    const int height = static_cast<int>(png_get_image_height(g.png, g.info));
    const int channels = png_get_channels(g.png, g.info);
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
        throw IoError("unsupported PNG layout in '" + path + "'");
    }

    std::vector<std::uint8_t> raster(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = raster.data() + static_cast<std::size_t>(y) * width * channels;
    }
    // re-arm after the allocations so a decode failure unwinds cleanly
    if (setjmp(png_jmpbuf(g.png))) {
        throw IoError("PNG decode failed for '" + path + "'");
    }
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);

    if (channels == 1) {
        GrayImage img(width, height);
        img.data() = std::move(raster);
        return img;
    }
    RgbImage rgb(width, height);
    rgb.data = std::move(raster);
    return to_grayscale(rgb);
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

inline GrayImage decode_jpeg_gray(std::FILE* file, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;

    std::vector<std::uint8_t> raster;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("JPEG decode failed for '" + path + "'");
    }
    jpeg_create_decompress(&cinfo);
    std::rewind(file);
    jpeg_stdio_src(&cinfo, file);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    if (width <= 0 || height <= 0 || cinfo.output_components != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("unsupported JPEG layout in '" + path + "'");
    }
    raster.resize(static_cast<std::size_t>(width) * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = raster.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    RgbImage rgb(width, height);
    rgb.data = std::move(raster);
    return to_grayscale(rgb);
}

}  // namespace detail

/// Decode a PNG or JPEG file (dispatched on magic bytes) to grayscale.
inline GrayImage load_gray(const std::filesystem::path& path) {
    detail::FilePtr file = detail::open_file(path, "rb");
    unsigned char magic[8] = {0};
    const std::size_t got = std::fread(magic, 1, 8, file.get());
    if (got == 8 && png_sig_cmp(magic, 0, 8) == 0) {
        return detail::decode_png_gray(file.get(), path.string());
    }
    if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8) {
        return detail::decode_jpeg_gray(file.get(), path.string());
    }
    throw IoError("'" + path.string() + "' is neither PNG nor JPEG");
}

/// Write an 8-bit single-channel PNG.
inline void save_gray_png(const std::filesystem::path& path, const GrayImage& img) {
    if (img.empty()) throw InputError("save_gray_png: empty image");
    detail::FilePtr file = detail::open_file(path, "wb");
    detail::PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw IoError("libpng init failed for '" + path.string() + "'");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw IoError("libpng init failed for '" + path.string() + "'");
    if (setjmp(png_jmpbuf(g.png))) {
        throw IoError("PNG encode failed for '" + path.string() + "'");
    }
    png_init_io(g.png, file.get());
    png_set_IHDR(g.png, g.info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(g.png, const_cast<png_bytep>(img.row(y)));
    }
    png_write_end(g.png, nullptr);
}

/// Write a mask as 0/255 single-channel PNG.
inline void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    if (mask.empty()) throw InputError("save_mask_png: empty mask");
    GrayImage img(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        img.data()[i] = mask.data()[i] ? 255 : 0;
    }
    save_gray_png(path, img);
}

/// Read a mask PNG back; intensities above 127 count as artifact.
inline BinaryMask load_mask(const std::filesystem::path& path) {
    const GrayImage img = load_gray(path);
    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        mask.data()[i] = img.data()[i] > 127 ? 1 : 0;
    }
    return mask;
}

}  // namespace raindrop
