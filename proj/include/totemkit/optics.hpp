// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_OPTICS_HPP
#define TOTEMKIT_OPTICS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "totemkit/camera.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

inline constexpr double kAirIor = 1.0;

// Roots at or below this are treated as the ray's own surface point.
inline constexpr double kIntersectEps = 1e-9;

/// Refractive glass sphere placed between the camera and the scene.
struct SphereTotem {
    Vec3 center;
    double radius = 0.0;
    double ior = 0.0;

    SphereTotem() = default;
    SphereTotem(const Vec3& c, double r, double n) : center(c), radius(r), ior(n) { validate(); }

    void validate() const {
        if (!(radius > 0.0)) throw std::invalid_argument("totem: radius must be positive");
        if (!(ior > 1.0)) throw std::invalid_argument("totem: ior must exceed 1");
        if (!(center.z > radius)) throw std::invalid_argument("totem: must sit entirely in front of the camera");
    }
};

struct SphereHit {
    Vec3 point;
    double t = 0.0;
};

/// Nearest intersection of a unit-direction ray with the sphere, strictly in
/// front of the origin. Absence (miss, or sphere behind) is a value.
inline std::optional<SphereHit> intersect(const SphereTotem& totem, const Ray& ray) {
    const Vec3 oc = ray.origin - totem.center;
    const double b = 2.0 * dot(oc, ray.direction);
    const double c = norm_sq(oc) - totem.radius * totem.radius;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return std::nullopt;

    const double sq = std::sqrt(disc);
    // Numerically stable quadratic: q and c/q are the two roots.
    const double q = -0.5 * (b + std::copysign(sq, b));
    double t0 = q;
    double t1 = (q != 0.0) ? c / q : -0.5 * b;  // q==0 iff b==0 and disc==b^2-4c==-4c>=0
    if (t0 > t1) std::swap(t0, t1);

    double t;
    if (t0 > kIntersectEps)
        t = t0;
    else if (t1 > kIntersectEps)
        t = t1;
    else
        return std::nullopt;
    return SphereHit{ray.at(t), t};
}

/// Vector-form Snell refraction. `normal` must be unit and oppose the incident
/// direction (dot(normal, d_in) < 0). Empty on total internal reflection.
inline std::optional<Vec3> refract(double n_incident, double n_transmitted, const Vec3& normal,
                                   const Vec3& d_in) {
    const double eta = n_incident / n_transmitted;
    // N x (-N x d) is the tangential component of d.
    const Vec3 tangential = cross(normal, cross(-normal, d_in));
    const double sin2_in = norm_sq(cross(normal, d_in));
    const double radicand = 1.0 - eta * eta * sin2_in;
    if (radicand < 0.0) return std::nullopt;
    return normalized(tangential * eta - normal * std::sqrt(radicand));
}

/// Refraction of an arbitrary ray through a totem: entry refraction at D,
/// interior chord, exit refraction at E. Normals are the outward (X-P)/R
/// flipped to oppose the incident direction before each refract call. Empty
/// when the ray misses the sphere or the exit refraction is TIR.
inline std::optional<Ray> trace_through_totem(const SphereTotem& totem, const Ray& ray_in) {
    const auto entry = intersect(totem, ray_in);
    if (!entry) return std::nullopt;

    Vec3 n_entry = (entry->point - totem.center) / totem.radius;
    if (dot(n_entry, ray_in.direction) > 0.0) n_entry = -n_entry;
    const auto d_inside = refract(kAirIor, totem.ior, n_entry, ray_in.direction);
    if (!d_inside) return std::nullopt;

    const auto exit = intersect(totem, Ray(entry->point, *d_inside));
    if (!exit) return std::nullopt;

    Vec3 n_exit = (exit->point - totem.center) / totem.radius;
    if (dot(n_exit, *d_inside) > 0.0) n_exit = -n_exit;
    const auto d_out = refract(totem.ior, kAirIor, n_exit, *d_inside);
    if (!d_out) return std::nullopt;

    return Ray(exit->point, *d_out);
}

/// Two-refraction mapping from a totem pixel to the scene light ray behind it.
inline std::optional<Ray> totem_pixel_to_scene_ray(const PinholeCamera& cam, const SphereTotem& totem,
                                                   double u, double v) {
    return trace_through_totem(totem, pixel_to_ray(cam, u, v));
}

}  // namespace totemkit

#endif
