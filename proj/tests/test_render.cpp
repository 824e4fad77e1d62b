// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "totemkit/render.hpp"

using namespace totemkit;

namespace {

SceneSpec small_default_scene() {
    SceneSpec spec = make_default_scene();
    spec.camera = PinholeCamera(70.0, 70.0, 64.0, 64.0, 128, 128);
    return spec;
}

SceneSpec uniform_red_scene() {
    SceneSpec spec;
    spec.seed = 1;
    spec.camera = PinholeCamera(70.0, 70.0, 64.0, 64.0, 128, 128);
    spec.room.width = 5;
    spec.room.height = 4;
    spec.room.depth = 6;
    const Texture red{TextureKind::Solid, {0.8, 0.1, 0.1}, {}, 0.5, 0};
    spec.room.back = spec.room.left = spec.room.right = spec.room.floor = spec.room.ceiling = red;
    spec.totems.push_back(SphereTotem({0, 0, 2.0}, 0.3, 1.5));
    return spec;
}

}  // namespace

TEST_CASE("render: uniform red scene shows red through the totem", "[render]") {
    const SceneSpec spec = uniform_red_scene();
    const RenderBundle bundle = render(spec, 2);
    REQUIRE(bundle.totem_masks.size() == 1);
    int64_t mask_px = 0, red_px = 0, black_px = 0;
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) {
            if (!bundle.totem_masks[0].mask.at(x, y)) continue;
            ++mask_px;
            const bool mapped =
                totem_pixel_to_scene_ray(spec.camera, spec.totems[0], x + 0.5, y + 0.5).has_value();
            const Vec3 c{bundle.image.at(x, y, 0), bundle.image.at(x, y, 1), bundle.image.at(x, y, 2)};
            if (mapped) {
                // Exit rays may still escape through the open front face.
                const auto out = totem_pixel_to_scene_ray(spec.camera, spec.totems[0], x + 0.5, y + 0.5);
                const Vec3 expected = oracles::march_color(spec, *out);
                if (norm(expected) == 0.0) {
                    CHECK(norm(c) == 0.0);
                } else {
                    CHECK(norm(c - Vec3{0.8, 0.1, 0.1}) < 1e-12);
                    ++red_px;
                }
            } else {
                CHECK(norm(c) == 0.0);
                ++black_px;
            }
        }
    REQUIRE(mask_px > 300);
    CHECK(red_px > 0.9 * mask_px);
}

TEST_CASE("render: totem pixels match the 1mm ray-march oracle", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle bundle = render(spec, 2);
    int64_t checked = 0;
    for (size_t j = 0; j < spec.totems.size(); ++j) {
        const ImageGray& mask = bundle.totem_masks[j].mask;
        for (int y = 0; y < mask.height; ++y)
            for (int x = 0; x < mask.width; ++x) {
                if (!mask.at(x, y)) continue;
                const auto out = totem_pixel_to_scene_ray(spec.camera, spec.totems[j], x + 0.5, y + 0.5);
                if (!out) continue;
                const Vec3 expected = oracles::march_color(spec, *out);
                const Vec3 got{bundle.image.at(x, y, 0), bundle.image.at(x, y, 1),
                               bundle.image.at(x, y, 2)};
                ++checked;
                REQUIRE(norm(got - Vec3{std::clamp(expected.x, 0.0, 1.0),
                                        std::clamp(expected.y, 0.0, 1.0),
                                        std::clamp(expected.z, 0.0, 1.0)}) < 1e-9);
            }
    }
    CHECK(checked > 1000);
}

TEST_CASE("render: masks are exactly the silhouette pixels", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle bundle = render(spec, 2);
    for (size_t j = 0; j < spec.totems.size(); ++j) {
        for (int y = 0; y < 128; ++y)
            for (int x = 0; x < 128; ++x) {
                const bool hit =
                    intersect(spec.totems[j], pixel_to_ray(spec.camera, x + 0.5, y + 0.5)).has_value();
                CHECK(static_cast<bool>(bundle.totem_masks[j].mask.at(x, y)) == hit);
            }
        CHECK(is_single_region(bundle.totem_masks[j].mask));
    }
}

TEST_CASE("render: mapper succeeds on at least 99 percent of mask pixels", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle bundle = render(spec, 2);
    for (size_t j = 0; j < spec.totems.size(); ++j) {
        int64_t mask_px = 0, mapped = 0;
        const ImageGray& mask = bundle.totem_masks[j].mask;
        for (int y = 0; y < 128; ++y)
            for (int x = 0; x < 128; ++x) {
                if (!mask.at(x, y)) continue;
                ++mask_px;
                if (totem_pixel_to_scene_ray(spec.camera, spec.totems[j], x + 0.5, y + 0.5)) ++mapped;
            }
        REQUIRE(mask_px > 100);
        CHECK(static_cast<double>(mapped) / mask_px >= 0.99);
    }
}

TEST_CASE("render: removing totems only changes mask pixels", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle with = render(spec, 2);
    SceneSpec bare = spec;
    bare.totems.clear();
    const RenderBundle without = render(bare, 2);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) {
            bool in_mask = false;
            for (const auto& m : with.totem_masks)
                if (m.mask.at(x, y)) in_mask = true;
            if (in_mask) continue;
            for (int c = 0; c < 3; ++c)
                CHECK(with.image.at(x, y, c) == without.image.at(x, y, c));
        }
}

TEST_CASE("render: deterministic and thread-count invariant", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle a = render(spec, 1);
    const RenderBundle b = render(spec, 2);
    const RenderBundle c = render(spec, 2);
    CHECK(a.image.data == b.image.data);
    CHECK(b.image.data == c.image.data);
    for (size_t j = 0; j < a.totem_masks.size(); ++j)
        CHECK(a.totem_masks[j].mask.data == b.totem_masks[j].mask.data);
}

TEST_CASE("render: every pixel is a texture sample or black, in range", "[render]") {
    const RenderBundle bundle = render(small_default_scene(), 2);
    for (const double v : bundle.image.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("render_novel_view: identity pose reproduces the capture", "[render]") {
    const SceneSpec spec = small_default_scene();
    const RenderBundle bundle = render(spec, 2);
    const ImageRGB novel = render_novel_view(spec, spec.camera, {}, 2);
    CHECK(novel.data == bundle.image.data);
}

TEST_CASE("render_novel_view: translation parallax matches analytic depths", "[render]") {
    SceneSpec spec = small_default_scene();
    spec.objects.clear();  // keep the probed region unoccluded
    CameraPose pose;
    pose.position = {0.25, 0.0, 0.0};
    const ImageRGB novel = render_novel_view(spec, spec.camera, pose, 2);
    // Probe pixels well above the totems: camera rays hit the back wall.
    for (int x = 30; x <= 98; x += 17) {
        for (int y = 20; y <= 44; y += 12) {
            const Ray ray = pose.apply(pixel_to_ray(spec.camera, x + 0.5, y + 0.5));
            // Analytic back-wall intersection.
            const double t = (spec.room.depth - ray.origin.z) / ray.direction.z;
            const Vec3 p = ray.at(t);
            if (std::abs(p.x) >= spec.room.width / 2 || std::abs(p.y) >= spec.room.height / 2)
                continue;
            const Vec3 expected = spec.room.back.sample(p.x, p.y);
            const Vec3 got{novel.at(x, y, 0), novel.at(x, y, 1), novel.at(x, y, 2)};
            CHECK(norm(got - expected) < 1e-12);
        }
    }
}

TEST_CASE("render_novel_view: degenerate camera is rejected", "[render]") {
    const SceneSpec spec = small_default_scene();
    PinholeCamera bad;  // zero resolution
    CHECK_THROWS(render_novel_view(spec, bad));
}

TEST_CASE("scene validation failures give descriptive errors", "[render]") {
    SceneSpec spec = small_default_scene();
    spec.totems[0].center.z = 7.0;  // behind the back wall
    CHECK_THROWS_WITH(render(spec), Catch::Matchers::ContainsSubstring("back wall"));
}
