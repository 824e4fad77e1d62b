// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "totemkit/optics.hpp"

using namespace totemkit;

namespace {

// Independent scalar-Snell oracle: decompose into angles about the normal and
// rebuild the transmitted direction from sin/cos, no vector refraction formula.
std::optional<Vec3> snell_oracle(double n1, double n2, const Vec3& normal, const Vec3& d_in) {
    const double cos1 = -dot(normal, d_in);
    const Vec3 tangent_raw = d_in + normal * cos1;
    const double sin1 = norm(tangent_raw);
    const double sin2 = n1 / n2 * sin1;
    if (sin2 > 1.0) return std::nullopt;
    const double cos2 = std::sqrt(1.0 - sin2 * sin2);
    if (sin1 < 1e-15) return -normal;  // normal incidence
    const Vec3 tangent = tangent_raw / sin1;
    return tangent * sin2 - normal * cos2;
}

// Quadratic-formula oracle for ray-sphere intersection (smallest positive root).
std::optional<double> quadratic_oracle(const Vec3& o, const Vec3& d, const Vec3& p, double r) {
    const double a = dot(d, d);
    const double b = 2.0 * dot(o - p, d);
    const double c = dot(o - p, o - p) - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double t0 = (-b - std::sqrt(disc)) / (2.0 * a);
    const double t1 = (-b + std::sqrt(disc)) / (2.0 * a);
    if (t0 > 1e-9) return t0;
    if (t1 > 1e-9) return t1;
    return std::nullopt;
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        const Vec3 v{u(rng), u(rng), u(rng)};
        const double n = norm(v);
        if (n > 1e-3 && n <= 1.0) return v / n;
    }
}

}  // namespace

TEST_CASE("intersect: axis-aligned hit", "[optics]") {
    const SphereTotem totem({0, 0, 5}, 1.0, 1.5);
    const auto hit = intersect(totem, Ray({0, 0, 0}, {0, 0, 1}));
    REQUIRE(hit.has_value());
    CHECK(hit->t == Catch::Approx(4.0).margin(1e-12));
    CHECK(norm(hit->point - Vec3{0, 0, 4}) < 1e-12);
}

TEST_CASE("intersect: perpendicular miss", "[optics]") {
    const SphereTotem totem({0, 0, 5}, 1.0, 1.5);
    CHECK_FALSE(intersect(totem, Ray({0, 0, 0}, {0, 1, 0})).has_value());
}

TEST_CASE("intersect: off-center ray matches quadratic oracle", "[optics]") {
    const SphereTotem totem({0.5, 0, 5}, 1.0, 1.5);
    const Ray ray({0, 0, 0}, {0, 0, 1});
    const auto hit = intersect(totem, ray);
    REQUIRE(hit.has_value());
    // Frozen from the oracle: t = (10 - sqrt(3)) / 2.
    CHECK(hit->t == Catch::Approx(4.1339745962155614).epsilon(1e-12));
    const auto t_oracle = quadratic_oracle(ray.origin, ray.direction, totem.center, totem.radius);
    REQUIRE(t_oracle.has_value());
    CHECK(hit->t == Catch::Approx(*t_oracle).margin(1e-12));
    CHECK(std::abs(norm(hit->point - totem.center) - totem.radius) < 1e-9);
}

TEST_CASE("intersect: sphere behind origin and tangent epsilon", "[optics]") {
    const SphereTotem totem({0, 0, 5}, 1.0, 1.5);
    CHECK_FALSE(intersect(totem, Ray({0, 0, 8}, {0, 0, 1})).has_value());
    // From a point on the surface, looking through: only the far root counts.
    const auto hit = intersect(totem, Ray({0, 0, 4}, {0, 0, 1}));
    REQUIRE(hit.has_value());
    CHECK(hit->t == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("intersect: random rays land on the sphere", "[optics]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    const int n = 20000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const SphereTotem totem{{pos(rng), pos(rng), 6.0 + pos(rng)}, 0.5 + 0.2 * (i % 3), 1.5};
        const Vec3 origin{pos(rng) * 0.1, pos(rng) * 0.1, 0};
        // Alternate between rays aimed near the sphere and fully random ones.
        const Vec3 dir = (i % 2 == 0) ? normalized(totem.center - origin + random_unit(rng) * 0.8)
                                      : random_unit(rng);
        const Ray ray(origin, dir);
        const auto hit = intersect(totem, ray);
        const auto oracle = quadratic_oracle(ray.origin, ray.direction, totem.center, totem.radius);
        REQUIRE(hit.has_value() == oracle.has_value());
        if (hit) {
            ++hits;
            CHECK(std::abs(norm(hit->point - totem.center) - totem.radius) < 1e-9);
            CHECK(hit->t == Catch::Approx(*oracle).margin(1e-9));
            CHECK(hit->t > 1e-9);
        }
    }
    CHECK(hits > 5000);
}

TEST_CASE("refract: normal incidence passes straight", "[optics]") {
    for (double n2 : {1.0, 1.5, 2.4}) {
        const auto out = refract(1.0, n2, {0, 0, -1}, {0, 0, 1});
        REQUIRE(out.has_value());
        CHECK(norm(*out - Vec3{0, 0, 1}) < 1e-12);
    }
}

TEST_CASE("refract: matched media identity", "[optics]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const Vec3 d = random_unit(rng);
        Vec3 n = random_unit(rng);
        if (dot(n, d) > 0) n = -n;
        if (std::abs(dot(n, d)) < 1e-6) continue;
        const auto out = refract(1.5, 1.5, n, d);
        REQUIRE(out.has_value());
        CHECK(norm(*out - d) < 1e-9);
    }
}

TEST_CASE("refract: 45 degrees air to glass matches scalar Snell", "[optics]") {
    const double s = std::sqrt(0.5);
    const Vec3 normal{0, 0, -1};
    const Vec3 d_in{s, 0, s};
    const auto out = refract(1.0, 1.5, normal, d_in);
    REQUIRE(out.has_value());
    // Frozen: sin(theta2) = sin(45deg)/1.5, cos from Pythagoras.
    CHECK(out->x == Catch::Approx(0.47140452079103173).epsilon(1e-12));
    CHECK(out->y == Catch::Approx(0.0).margin(1e-15));
    CHECK(out->z == Catch::Approx(0.8819171036881969).epsilon(1e-12));
    const auto oracle = snell_oracle(1.0, 1.5, normal, d_in);
    REQUIRE(oracle.has_value());
    CHECK(norm(*out - *oracle) < 1e-9);
}

TEST_CASE("refract: total internal reflection past the critical angle", "[optics]") {
    // Critical angle for glass-to-air: asin(1/1.5) ~ 41.81deg; 45deg exceeds it.
    const double critical = std::asin(1.0 / 1.5);
    REQUIRE(M_PI / 4 > critical);
    const double s = std::sqrt(0.5);
    CHECK_FALSE(refract(1.5, 1.0, {0, 0, -1}, {s, 0, s}).has_value());
    // Just below critical still refracts.
    const double a = critical - 1e-3;
    CHECK(refract(1.5, 1.0, {0, 0, -1}, {std::sin(a), 0, std::cos(a)}).has_value());
}

TEST_CASE("refract: random configurations obey Snell, planarity, round trip", "[optics]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ior(1.0, 2.0);
    int refracted = 0;
    for (int i = 0; i < 20000; ++i) {
        const Vec3 d = random_unit(rng);
        Vec3 n = random_unit(rng);
        if (dot(n, d) > 0) n = -n;
        if (std::abs(dot(n, d)) < 1e-4) continue;
        const double n1 = ior(rng), n2 = ior(rng);
        const auto out = refract(n1, n2, n, d);
        const auto oracle = snell_oracle(n1, n2, n, d);
        REQUIRE(out.has_value() == oracle.has_value());
        if (!out) continue;
        ++refracted;
        CHECK(std::abs(norm(*out) - 1.0) < 1e-12);
        // Scalar Snell: n1 sin(theta1) = n2 sin(theta2).
        const double sin1 = norm(cross(n, d));
        const double sin2 = norm(cross(n, *out));
        CHECK(std::abs(n1 * sin1 - n2 * sin2) < 1e-9);
        // In-plane with (normal, incident).
        const Vec3 plane_normal = cross(n, d);
        if (norm(plane_normal) > 1e-9) CHECK(std::abs(dot(*out, plane_normal)) < 1e-9);
        // Reversibility: running the transmitted ray backwards recovers the
        // reversed incident ray.
        const auto back = refract(n2, n1, -n, -*out);
        REQUIRE(back.has_value());
        CHECK(norm(*back - (-d)) < 1e-9);
    }
    CHECK(refracted > 10000);
}

TEST_CASE("totem mapper: central ray exits collinear", "[optics]") {
    const PinholeCamera cam(100, 100, 50, 50, 100, 100);
    const SphereTotem totem({0, 0, 4}, 0.5, 1.5);
    const auto out = totem_pixel_to_scene_ray(cam, totem, 50.0, 50.0);
    REQUIRE(out.has_value());
    CHECK(norm(out->direction - Vec3{0, 0, 1}) < 1e-9);
    CHECK(norm(out->origin - Vec3{0, 0, 4.5}) < 1e-9);
}

TEST_CASE("totem mapper: per-surface Snell oracle reproduces the exit ray", "[optics]") {
    const PinholeCamera cam(120, 120, 64, 64, 128, 128);
    const SphereTotem totem({0.2, -0.1, 4}, 0.5, 1.5);
    int checked = 0;
    for (int y = 0; y < 128; y += 2) {
        for (int x = 0; x < 128; x += 2) {
            const Ray cam_ray = pixel_to_ray(cam, x + 0.5, y + 0.5);
            const auto out = totem_pixel_to_scene_ray(cam, totem, x + 0.5, y + 0.5);
            if (!out) continue;
            ++checked;
            // Oracle: replay both refractions with the angle-based construction.
            const auto entry = intersect(totem, cam_ray);
            REQUIRE(entry.has_value());
            Vec3 n1 = (entry->point - totem.center) / totem.radius;
            if (dot(n1, cam_ray.direction) > 0) n1 = -n1;
            const auto d_mid = snell_oracle(1.0, totem.ior, n1, cam_ray.direction);
            REQUIRE(d_mid.has_value());
            const auto exit = intersect(totem, Ray(entry->point, *d_mid));
            REQUIRE(exit.has_value());
            Vec3 n2 = (exit->point - totem.center) / totem.radius;
            if (dot(n2, *d_mid) > 0) n2 = -n2;
            const auto d_out = snell_oracle(totem.ior, 1.0, n2, *d_mid);
            REQUIRE(d_out.has_value());
            CHECK(norm(out->direction - *d_out) < 1e-9);
            CHECK(norm(out->origin - exit->point) < 1e-9);
            // Exit point on the sphere, exit direction into the far hemisphere.
            CHECK(std::abs(norm(out->origin - totem.center) - totem.radius) < 1e-9);
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("totem mapper: mirrored pixels deviate symmetrically", "[optics]") {
    const PinholeCamera cam(128, 128, 64, 64, 128, 128);
    const SphereTotem totem({0, 0, 4}, 0.5, 1.5);
    // Silhouette center projects to the principal point; mirror across it.
    for (double offset : {3.0, 7.0, 11.0}) {
        const auto a = totem_pixel_to_scene_ray(cam, totem, 64.0 + offset, 64.0);
        const auto b = totem_pixel_to_scene_ray(cam, totem, 64.0 - offset, 64.0);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        const Ray in_a = pixel_to_ray(cam, 64.0 + offset, 64.0);
        const Ray in_b = pixel_to_ray(cam, 64.0 - offset, 64.0);
        const double dev_a = std::acos(std::clamp(dot(a->direction, in_a.direction), -1.0, 1.0));
        const double dev_b = std::acos(std::clamp(dot(b->direction, in_b.direction), -1.0, 1.0));
        CHECK(dev_a == Catch::Approx(dev_b).margin(1e-9));
        CHECK(dev_a > 1e-4);
    }
}

TEST_CASE("totem mapper: silhouette pixels map exactly when not TIR", "[optics]") {
    const PinholeCamera cam(128, 128, 64, 64, 128, 128);
    const SphereTotem totem({0, 0.1, 3.5}, 0.45, 1.5);
    int64_t mask_pixels = 0, mapped = 0, tir = 0;
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            const Ray ray = pixel_to_ray(cam, x + 0.5, y + 0.5);
            const bool hits = intersect(totem, ray).has_value();
            const bool maps = totem_pixel_to_scene_ray(cam, totem, x + 0.5, y + 0.5).has_value();
            if (!hits) {
                CHECK_FALSE(maps);
                continue;
            }
            ++mask_pixels;
            if (maps)
                ++mapped;
            else
                ++tir;
        }
    }
    REQUIRE(mask_pixels > 500);
    // Spherical lenses transmit everywhere except a measure-zero grazing rim.
    CHECK(mapped + tir == mask_pixels);
    CHECK(static_cast<double>(mapped) / mask_pixels >= 0.99);
}
