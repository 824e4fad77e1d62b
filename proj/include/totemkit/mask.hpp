// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_MASK_HPP
#define TOTEMKIT_MASK_HPP

#include <utility>
#include <vector>

#include "totemkit/image.hpp"

namespace totemkit {

/// Binary totem silhouette plus its ordered outer contour.
struct TotemMask {
    int totem_id = 0;
    ImageGray mask;
    std::vector<std::pair<int, int>> boundary;
};

/// Moore-neighbor contour tracing (Jacob's stopping criterion). Returns the
/// ordered outer contour of the first region found in raster order; empty for
/// an empty mask.
inline std::vector<std::pair<int, int>> trace_boundary(const ImageGray& mask) {
    auto set = [&](int x, int y) { return mask.contains(x, y) && mask.at(x, y) != 0; };

    int sx = -1, sy = -1;
    for (int y = 0; y < mask.height && sx < 0; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (set(x, y)) {
                sx = x;
                sy = y;
                break;
            }
    if (sx < 0) return {};

    // Clockwise Moore neighborhood starting west.
    static constexpr int dx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static constexpr int dy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    auto ring_index = [&](int cx, int cy, int qx, int qy) {
        for (int k = 0; k < 8; ++k)
            if (cx + dx[k] == qx && cy + dy[k] == qy) return k;
        return -1;
    };

    std::vector<std::pair<int, int>> contour;
    int px = sx, py = sy;
    int bx = sx - 1, by = sy;  // west of the raster-first pixel is empty
    contour.emplace_back(px, py);

    const size_t limit = mask.pixel_count() * 4 + 8;
    while (contour.size() < limit) {
        const int k0 = ring_index(px, py, bx, by);
        int found = -1;
        for (int i = 1; i <= 8; ++i) {
            const int dir = (k0 + i) % 8;
            if (set(px + dx[dir], py + dy[dir])) {
                found = dir;
                break;
            }
            bx = px + dx[dir];  // last empty cell scanned
            by = py + dy[dir];
        }
        if (found < 0) return contour;  // isolated pixel

        px += dx[found];
        py += dy[found];
        if (px == sx && py == sy && bx == sx - 1 && by == sy) break;  // Jacob's criterion
        contour.emplace_back(px, py);
    }
    return contour;
}

/// True when the set pixels form one 4-connected region (used by tests and
/// mask validation).
inline bool is_single_region(const ImageGray& mask) {
    int total = 0;
    int sx = -1, sy = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y) != 0) {
                ++total;
                if (sx < 0) {
                    sx = x;
                    sy = y;
                }
            }
    if (total == 0) return false;

    ImageGray seen(mask.width, mask.height, 1, 0);
    std::vector<std::pair<int, int>> stack{{sx, sy}};
    seen.at(sx, sy) = 1;
    int reached = 0;
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++reached;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
            if (mask.contains(nx[k], ny[k]) && mask.at(nx[k], ny[k]) != 0 && !seen.at(nx[k], ny[k])) {
                seen.at(nx[k], ny[k]) = 1;
                stack.emplace_back(nx[k], ny[k]);
            }
        }
    }
    return reached == total;
}

}  // namespace totemkit

#endif
