// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_PNG_IO_HPP
#define TOTEMKIT_PNG_IO_HPP

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "totemkit/image.hpp"

namespace totemkit {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open " + path);
    return f;
}

}  // namespace detail

/// 16-bit RGB, the scene image format. Values clamped to [0,1] and quantized.
inline void write_png_rgb16(const std::string& path, const ImageRGB& img) {
    if (img.channels != 3) throw std::invalid_argument("write_png_rgb16: need 3 channels");
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, img.width, img.height, 16, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<uint8_t> row(static_cast<size_t>(img.width) * 6);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const uint16_t q = quantize16(img.at(x, y, c));
                row[static_cast<size_t>(x) * 6 + c * 2] = static_cast<uint8_t>(q >> 8);
                row[static_cast<size_t>(x) * 6 + c * 2 + 1] = static_cast<uint8_t>(q & 0xff);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// 8-bit single channel, the mask format (nonzero = set).
inline void write_png_gray8(const std::string& path, const ImageGray& img) {
    if (img.channels != 1) throw std::invalid_argument("write_png_gray8: need 1 channel");
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.data[static_cast<size_t>(y) * img.width]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// 8-bit RGB (used for colormapped heatmaps).
inline void write_png_rgb8(const std::string& path, const Image<uint8_t>& img) {
    if (img.channels != 3) throw std::invalid_argument("write_png_rgb8: need 3 channels");
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.data[static_cast<size_t>(y) * img.width * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Read a 16-bit RGB PNG back into [0,1] doubles (8-bit inputs also accepted).
inline ImageRGB read_png_rgb(const std::string& path) {
    auto file = detail::open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png read failed: " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int out_depth = png_get_bit_depth(png, info);
    const size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<uint8_t> raw(rowbytes * height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = raw.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageRGB img(width, height, 3);
    for (int y = 0; y < height; ++y) {
        const uint8_t* row = raw.data() + rowbytes * y;
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                if (out_depth == 16) {
                    const uint16_t hi = row[(static_cast<size_t>(x) * 3 + c) * 2];
                    const uint16_t lo = row[(static_cast<size_t>(x) * 3 + c) * 2 + 1];
                    img.at(x, y, c) = dequantize16(static_cast<uint16_t>((hi << 8) | lo));
                } else {
                    img.at(x, y, c) = row[static_cast<size_t>(x) * 3 + c] / 255.0;
                }
            }
        }
    }
    return img;
}

/// Read any single-image PNG as an 8-bit mask; nonzero = set.
inline ImageGray read_png_gray(const std::string& path) {
    auto file = detail::open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png read failed: " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));

    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
    png_set_strip_alpha(png);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const size_t rowbytes = png_get_rowbytes(png, info);
    ImageGray img(width, height, 1);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = &img.data[static_cast<size_t>(y) * width];
    if (rowbytes != static_cast<size_t>(width)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unexpected row size reading " + path);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace totemkit

#endif
