// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_POSEFIT_HPP
#define TOTEMKIT_POSEFIT_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "totemkit/camera.hpp"
#include "totemkit/mask.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

struct BBox {
    double u_min = 0.0, u_max = 0.0, v_min = 0.0, v_max = 0.0;

    double area() const { return std::max(0.0, u_max - u_min) * std::max(0.0, v_max - v_min); }
};

/// Jaccard loss 1 - |pred ∩ target| / |pred ∪ target| over axis-aligned boxes.
inline double iou_loss(const BBox& pred, const BBox& target) {
    if (pred.u_min > pred.u_max || pred.v_min > pred.v_max || target.u_min > target.u_max ||
        target.v_min > target.v_max)
        throw std::invalid_argument("iou_loss: invalid box");
    const double iw = std::min(pred.u_max, target.u_max) - std::max(pred.u_min, target.u_min);
    const double ih = std::min(pred.v_max, target.v_max) - std::max(pred.v_min, target.v_min);
    const double inter = std::max(0.0, iw) * std::max(0.0, ih);
    const double uni = pred.area() + target.area() - inter;
    if (uni <= 0.0) throw std::invalid_argument("iou_loss: zero-area union");
    return 1.0 - inter / uni;
}

/// Bounding box of the mask pixels, taken at pixel centers.
inline BBox mask_bbox(const TotemMask& m) {
    BBox box{1e30, -1e30, 1e30, -1e30};
    bool any = false;
    for (int y = 0; y < m.mask.height; ++y)
        for (int x = 0; x < m.mask.width; ++x)
            if (m.mask.at(x, y) != 0) {
                any = true;
                box.u_min = std::min(box.u_min, x + 0.5);
                box.u_max = std::max(box.u_max, x + 0.5);
                box.v_min = std::min(box.v_min, y + 0.5);
                box.v_max = std::max(box.v_max, y + 0.5);
            }
    if (!any) throw std::invalid_argument("mask_bbox: empty mask");
    return box;
}

namespace detail {

/// Golden-section minimization of a unimodal scalar function on [lo, hi].
template <typename F>
double golden_section(F f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Tangent circle of the cone from the origin to a sphere (center, radius):
/// center C, radius T, axis n. Valid whenever the origin is outside the sphere.
struct TangentCircle {
    Vec3 center;
    double radius;
    Vec3 axis;
};

inline TangentCircle tangent_circle(const Vec3& sphere_center, double sphere_radius) {
    const double len = norm(sphere_center);
    if (len <= sphere_radius)
        throw std::invalid_argument("tangent_circle: camera at or inside the sphere");
    const double len2 = len * len, r2 = sphere_radius * sphere_radius;
    TangentCircle tc;
    tc.axis = sphere_center / len;
    tc.center = sphere_center * ((len2 - r2) / len2);
    tc.radius = sphere_radius * std::sqrt(len2 - r2) / len;
    return tc;
}

}  // namespace detail

/// Estimate a totem's center from its silhouette mask and known radius:
/// boundary rays form a tangent cone; fit the circular cone/sphere
/// intersection, then recover the center along the cone axis by similar
/// triangles. Approximate by construction, especially off-axis.
inline Vec3 init_totem_pose(const PinholeCamera& cam, const TotemMask& m, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("init_totem_pose: radius must be positive");
    const auto& boundary = m.boundary;
    if (boundary.size() < 16) throw std::invalid_argument("init_totem_pose: mask degenerate");

    std::vector<Vec3> dirs;
    dirs.reserve(boundary.size());
    Vec3 d_sum{0, 0, 0};
    for (const auto& [bx, by] : boundary) {
        const Vec3 d = pixel_to_ray(cam, bx + 0.5, by + 0.5).direction;
        dirs.push_back(d);
        d_sum += d;
    }
    const double k_count = static_cast<double>(dirs.size());
    const Vec3 d_mean = d_sum / k_count;  // un-normalized cone base direction
    if (norm(d_mean) < 1e-12) throw std::invalid_argument("init_totem_pose: mask degenerate");
    const Vec3 d_axis = normalized(d_mean);

    // Collinearity check: all boundary rays parallel to the axis means no cone.
    double max_sin = 0.0;
    for (const auto& d : dirs) max_sin = std::max(max_sin, norm(cross(d, d_axis)));
    if (max_sin < 1e-9) throw std::invalid_argument("init_totem_pose: mask degenerate");

    double theta_sum = 0.0, sin_phi_sum = 0.0;
    for (const auto& d : dirs) {
        const double theta = std::acos(std::clamp(dot(d, d_axis), -1.0, 1.0));
        theta_sum += theta;
        sin_phi_sum += std::sin(M_PI / 2 - theta);
    }
    const double theta_mean = theta_sum / k_count;
    const double circle_radius = radius * sin_phi_sum / k_count;  // T_j

    if (std::sin(theta_mean) < 1e-12) throw std::invalid_argument("init_totem_pose: mask degenerate");
    const double z_guess = radius / std::sin(theta_mean);

    // Slant height: cone base center at t is mean(d_k) * t; match the mean
    // boundary distance from it to the circle radius.
    auto objective = [&](double t) {
        const Vec3 base = d_mean * t;
        double dist_sum = 0.0;
        for (const auto& d : dirs) dist_sum += norm(d * t - base);
        return std::abs(dist_sum / k_count - circle_radius);
    };
    const double t_est = detail::golden_section(objective, 1e-12, 10.0 * z_guess, 1e-9);

    const Vec3 base_center = d_mean * t_est;         // C
    const double oc = norm(base_center);             // |OC|
    const double pc = circle_radius * circle_radius / oc;  // |P_j C|, similar triangles
    return d_axis * (pc + oc);                       // P_j
}

/// Bounding box of the totem's projected tangent circle, sampled uniformly in
/// angle and pushed through perspective projection.
inline BBox predicted_bbox(const PinholeCamera& cam, const Vec3& center, double radius,
                           int n_samples = 1000) {
    if (!(center.z > radius)) throw std::invalid_argument("predicted_bbox: sphere behind or straddling camera");
    if (n_samples < 3) throw std::invalid_argument("predicted_bbox: need at least 3 samples");
    const auto tc = detail::tangent_circle(center, radius);

    Vec3 e1 = cross(tc.axis, Vec3{0, 0, 1});
    if (norm(e1) < 1e-12) e1 = Vec3{1, 0, 0};
    e1 = normalized(e1);
    const Vec3 e2 = normalized(cross(tc.axis, e1));

    BBox box{1e30, -1e30, 1e30, -1e30};
    for (int i = 0; i < n_samples; ++i) {
        const double a = 2.0 * M_PI * i / n_samples;
        const Vec3 p = tc.center + (e1 * std::cos(a) + e2 * std::sin(a)) * tc.radius;
        const auto [u, v] = project_point(cam, p);
        box.u_min = std::min(box.u_min, u);
        box.u_max = std::max(box.u_max, u);
        box.v_min = std::min(box.v_min, v);
        box.v_max = std::max(box.v_max, v);
    }
    return box;
}

}  // namespace totemkit

#endif
