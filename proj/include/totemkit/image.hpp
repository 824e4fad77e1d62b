// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_IMAGE_HPP
#define TOTEMKIT_IMAGE_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace totemkit {

/// Row-major interleaved image. Pixel (x, y), x = column = u, y = row = v.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, int c, T fill = T{}) : width(w), height(h), channels(c) {
        if (w <= 0 || h <= 0 || c <= 0) throw std::invalid_argument("image: non-positive dimensions");
        data.assign(static_cast<size_t>(w) * h * c, fill);
    }

    bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    T& at(int x, int y, int c = 0) { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
    const T& at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

using ImageRGB = Image<double>;    // 3 channels, values in [0,1]
using ImageGray = Image<uint8_t>;  // 1 channel, nonzero = set
using ImageF = Image<double>;      // 1 channel scalar field

inline double mean_abs_diff(const ImageRGB& a, const ImageRGB& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mean_abs_diff: shape mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) sum += std::abs(a.data[i] - b.data[i]);
    return sum / static_cast<double>(a.data.size());
}

/// Mean |a-b| over pixels where keep(x, y) is true; averages over channels.
template <typename Pred>
inline double mean_abs_diff_where(const ImageRGB& a, const ImageRGB& b, Pred keep) {
    if (!a.same_shape(b)) throw std::invalid_argument("mean_abs_diff_where: shape mismatch");
    double sum = 0.0;
    int64_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            if (!keep(x, y)) continue;
            for (int c = 0; c < a.channels; ++c) sum += std::abs(a.at(x, y, c) - b.at(x, y, c));
            n += a.channels;
        }
    if (n == 0) throw std::invalid_argument("mean_abs_diff_where: empty selection");
    return sum / static_cast<double>(n);
}

inline uint16_t quantize16(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<uint16_t>(v * 65535.0 + 0.5);
}

inline double dequantize16(uint16_t v) { return static_cast<double>(v) / 65535.0; }

}  // namespace totemkit

#endif
