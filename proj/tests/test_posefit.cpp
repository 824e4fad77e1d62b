// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "totemkit/posefit.hpp"
#include "totemkit/render.hpp"

using namespace totemkit;

namespace {

// Exact silhouette: pixels whose center ray intersects the sphere.
TotemMask silhouette_mask(const PinholeCamera& cam, const SphereTotem& totem) {
    TotemMask m;
    m.totem_id = 0;
    m.mask = ImageGray(cam.width, cam.height, 1, 0);
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x)
            if (intersect(totem, pixel_to_ray(cam, x + 0.5, y + 0.5))) m.mask.at(x, y) = 255;
    m.boundary = trace_boundary(m.mask);
    return m;
}

}  // namespace

TEST_CASE("iou_loss: fixed examples and symmetry", "[posefit]") {
    const BBox a{0, 2, 0, 2};
    CHECK(iou_loss(a, a) == Catch::Approx(0.0).margin(1e-15));
    const BBox b{5, 7, 5, 7};
    CHECK(iou_loss(a, b) == Catch::Approx(1.0).margin(1e-15));
    const BBox c{1, 3, 1, 3};
    CHECK(iou_loss(a, c) == Catch::Approx(6.0 / 7.0).epsilon(1e-12));
    CHECK(iou_loss(a, c) == Catch::Approx(iou_loss(c, a)).margin(1e-15));
    CHECK_THROWS(iou_loss(BBox{0, 0, 0, 0}, BBox{1, 1, 2, 2}));
    CHECK_THROWS(iou_loss(BBox{2, 0, 0, 2}, a));
}

TEST_CASE("predicted_bbox: on-axis box is square and centered", "[posefit]") {
    const PinholeCamera cam(200, 200, 100, 100, 200, 200);
    const BBox box = predicted_bbox(cam, {0, 0, 3}, 0.4);
    CHECK((box.u_min + box.u_max) / 2 == Catch::Approx(100.0).margin(0.5));
    CHECK((box.v_min + box.v_max) / 2 == Catch::Approx(100.0).margin(0.5));
    CHECK(box.u_max - box.u_min == Catch::Approx(box.v_max - box.v_min).margin(0.01));

    // Sparse vs dense sampling on an axis-aligned circle.
    const BBox sparse = predicted_bbox(cam, {0, 0, 3}, 0.4, 4);
    CHECK(sparse.u_max - sparse.u_min ==
          Catch::Approx(box.u_max - box.u_min).epsilon(0.01));
    CHECK(sparse.v_max - sparse.v_min ==
          Catch::Approx(box.v_max - box.v_min).epsilon(0.01));
}

TEST_CASE("predicted_bbox: monotone in radius", "[posefit]") {
    const PinholeCamera cam(180, 180, 128, 128, 256, 256);
    const Vec3 center{0.6, 0.4, 2.5};
    BBox prev = predicted_bbox(cam, center, 0.05);
    for (double r = 0.1; r < 0.9; r += 0.05) {
        const BBox cur = predicted_bbox(cam, center, r);
        CHECK(cur.u_min <= prev.u_min + 1e-9);
        CHECK(cur.u_max >= prev.u_max - 1e-9);
        CHECK(cur.v_min <= prev.v_min + 1e-9);
        CHECK(cur.v_max >= prev.v_max - 1e-9);
        prev = cur;
    }
    CHECK_THROWS(predicted_bbox(cam, {0, 0, 0.3}, 0.4));
}

TEST_CASE("predicted_bbox matches the rendered silhouette box", "[posefit]") {
    const PinholeCamera cam(180, 180, 128, 128, 256, 256);
    const SphereTotem totem({0.5, 0.35, 2.0}, 0.25, 1.5);
    const TotemMask mask = silhouette_mask(cam, totem);
    const BBox pred = predicted_bbox(cam, totem.center, totem.radius);
    const BBox actual = mask_bbox(mask);
    CHECK(iou_loss(pred, actual) < 0.05);
}

TEST_CASE("init_totem_pose: on-axis center lands on the axis", "[posefit]") {
    const PinholeCamera cam(230, 230, 128, 128, 256, 256);
    const SphereTotem totem({0, 0, 2.2}, 0.35, 1.5);
    const TotemMask mask = silhouette_mask(cam, totem);
    const Vec3 est = init_totem_pose(cam, mask, totem.radius);
    CHECK(std::abs(est.x) < 1e-6 * totem.center.z);
    CHECK(std::abs(est.y) < 1e-6 * totem.center.z);
    CHECK(est.z == Catch::Approx(totem.center.z).epsilon(0.02));
    CHECK(norm(est - totem.center) / norm(totem.center) < 0.02);
}

TEST_CASE("init_totem_pose: off-axis recovery within 8 percent up to 20 degrees", "[posefit]") {
    const PinholeCamera cam(180, 180, 128, 128, 256, 256);
    // Angles from the optical axis: ~10, ~15, ~20 degrees.
    const Vec3 centers[] = {{0.30, 0.20, 2.2}, {0.45, 0.30, 2.1}, {0.60, 0.40, 2.0}};
    for (const Vec3& c : centers) {
        const double angle = std::acos(c.z / norm(c)) * 180.0 / M_PI;
        REQUIRE(angle < 20.5);
        const SphereTotem totem(c, 0.25, 1.5);
        const TotemMask mask = silhouette_mask(cam, totem);
        const Vec3 est = init_totem_pose(cam, mask, totem.radius);
        CHECK(norm(est - c) / norm(c) < 0.08);
    }
}

TEST_CASE("init_totem_pose: similarity invariance", "[posefit]") {
    const PinholeCamera cam(128, 128, 64, 64, 128, 128);
    const SphereTotem near_totem({0, 0, 2.0}, 0.25, 1.5);
    const SphereTotem far_totem({0, 0, 4.0}, 0.5, 1.5);
    const TotemMask mask_near = silhouette_mask(cam, near_totem);
    const TotemMask mask_far = silhouette_mask(cam, far_totem);
    // Doubling depth and radius leaves the silhouette identical.
    REQUIRE(mask_near.mask.data == mask_far.mask.data);
    const Vec3 est_near = init_totem_pose(cam, mask_near, near_totem.radius);
    const Vec3 est_far = init_totem_pose(cam, mask_far, far_totem.radius);
    CHECK(norm(est_far - est_near * 2.0) < 1e-9 * norm(est_far));
}

TEST_CASE("init_totem_pose: equivariant under camera roll", "[posefit]") {
    const int w = 128;
    const PinholeCamera cam(140, 140, w / 2.0, w / 2.0, w, w);
    const SphereTotem totem({0.35, 0.15, 2.4}, 0.25, 1.5);
    const TotemMask mask = silhouette_mask(cam, totem);

    // Rotate the mask 90 degrees clockwise about the principal point:
    // (x, y) -> (w-1-y, x).
    TotemMask rotated;
    rotated.totem_id = 0;
    rotated.mask = ImageGray(w, w, 1, 0);
    for (int y = 0; y < w; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.mask.at(x, y)) rotated.mask.at(w - 1 - y, x) = 255;
    rotated.boundary = trace_boundary(rotated.mask);

    const Vec3 est = init_totem_pose(cam, mask, totem.radius);
    const Vec3 est_rot = init_totem_pose(cam, rotated, totem.radius);
    // The camera-space center rotates the same way: (x, y, z) -> (-y, x, z).
    const Vec3 expected{-est.y, est.x, est.z};
    CHECK(norm(est_rot - expected) / norm(expected) < 1e-6);
}

TEST_CASE("init_totem_pose: degenerate masks are rejected", "[posefit]") {
    const PinholeCamera cam(128, 128, 64, 64, 128, 128);
    TotemMask tiny;
    tiny.totem_id = 0;
    tiny.mask = ImageGray(128, 128, 1, 0);
    tiny.mask.at(4, 4) = 255;
    tiny.boundary = trace_boundary(tiny.mask);
    CHECK_THROWS_WITH(init_totem_pose(cam, tiny, 0.25),
                      Catch::Matchers::ContainsSubstring("degenerate"));
    CHECK_THROWS(init_totem_pose(cam, tiny, -1.0));
}

TEST_CASE("iou_loss gradient through projection: finite-difference consistency", "[posefit]") {
    const PinholeCamera cam(180, 180, 128, 128, 256, 256);
    const SphereTotem totem({0.4, 0.3, 2.0}, 0.25, 1.5);
    const TotemMask mask = silhouette_mask(cam, totem);
    const BBox target = mask_bbox(mask);

    // Perturbed center so the gradient is non-degenerate.
    const Vec3 center = totem.center + Vec3{0.03, -0.02, 0.05};
    auto loss_at = [&](const Vec3& c) { return iou_loss(predicted_bbox(cam, c, totem.radius), target); };

    for (int axis = 0; axis < 3; ++axis) {
        // The optimizer's estimate (step 1e-4) vs an independent finer step.
        auto fd = [&](double h) {
            Vec3 p = center, m = center;
            p[axis] += h;
            m[axis] -= h;
            return (loss_at(p) - loss_at(m)) / (2 * h);
        };
        const double coarse = fd(1e-4);
        const double fine = fd(1e-5);
        REQUIRE(std::abs(fine) > 1e-6);
        CHECK(std::abs(coarse - fine) / std::abs(fine) < 1e-3);
    }
}
