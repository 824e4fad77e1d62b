// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "totemkit/mask.hpp"

using namespace totemkit;

namespace {

ImageGray disk_mask(int w, int h, double cx, double cy, double r) {
    ImageGray m(w, h, 1, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
            if (dx * dx + dy * dy <= r * r) m.at(x, y) = 255;
        }
    return m;
}

}  // namespace

TEST_CASE("trace_boundary: disk contour is a closed rim", "[mask]") {
    const ImageGray m = disk_mask(64, 64, 32.0, 30.0, 13.0);
    const auto contour = trace_boundary(m);
    REQUIRE(contour.size() > 40);

    std::set<std::pair<int, int>> seen;
    for (size_t i = 0; i < contour.size(); ++i) {
        const auto [x, y] = contour[i];
        CHECK(m.at(x, y) != 0);
        // Every contour pixel touches the outside (4-neighborhood).
        bool touches_outside = false;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k)
            if (!m.contains(nx[k], ny[k]) || m.at(nx[k], ny[k]) == 0) touches_outside = true;
        CHECK(touches_outside);
        // Consecutive contour pixels are 8-adjacent.
        const auto [px, py] = contour[(i + contour.size() - 1) % contour.size()];
        CHECK(std::max(std::abs(x - px), std::abs(y - py)) <= 1);
        seen.insert({x, y});
    }
    // The contour visits the full rim: compare against all boundary pixels.
    int rim = 0;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            bool edge = false;
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k)
                if (!m.contains(nx[k], ny[k]) || m.at(nx[k], ny[k]) == 0) edge = true;
            if (edge) {
                ++rim;
                CHECK(seen.count({x, y}) == 1);
            }
        }
    CHECK(rim > 0);
}

TEST_CASE("trace_boundary: empty and single-pixel masks", "[mask]") {
    ImageGray empty(8, 8, 1, 0);
    CHECK(trace_boundary(empty).empty());

    ImageGray single(8, 8, 1, 0);
    single.at(3, 4) = 255;
    const auto contour = trace_boundary(single);
    REQUIRE(contour.size() == 1);
    CHECK(contour[0] == std::make_pair(3, 4));
}

TEST_CASE("is_single_region", "[mask]") {
    ImageGray m(16, 16, 1, 0);
    CHECK_FALSE(is_single_region(m));
    m.at(2, 2) = 255;
    m.at(3, 2) = 255;
    m.at(3, 3) = 255;
    CHECK(is_single_region(m));
    m.at(10, 10) = 255;  // second component
    CHECK_FALSE(is_single_region(m));
    m.at(10, 10) = 0;
    m.at(4, 4) = 255;  // diagonal touch only: not 4-connected
    CHECK_FALSE(is_single_region(m));
}
