// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_CAMERA_HPP
#define TOTEMKIT_CAMERA_HPP

#include <stdexcept>
#include <utility>

#include "totemkit/vec.hpp"

namespace totemkit {

/// Pinhole camera at the origin looking down +z, x right, y down (image v grows
/// downward). Pixel coordinates are continuous; the center of the integer pixel
/// (i, j) is (i + 0.5, j + 0.5).
struct PinholeCamera {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    PinholeCamera() = default;
    PinholeCamera(double fx_, double fy_, double cx_, double cy_, int w, int h)
        : fx(fx_), fy(fy_), cx(cx_), cy(cy_), width(w), height(h) {
        validate();
    }

    void validate() const {
        if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("camera: focal lengths must be positive");
        if (width <= 0 || height <= 0) throw std::invalid_argument("camera: resolution must be positive");
        if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
            throw std::invalid_argument("camera: principal point outside image");
    }
};

/// Camera ray through the (continuous) pixel coordinate (u, v).
inline Ray pixel_to_ray(const PinholeCamera& cam, double u, double v) {
    return Ray({0.0, 0.0, 0.0}, {(u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0});
}

/// Perspective projection of a camera-space point; depth is the z-coordinate.
inline std::pair<double, double> project_point(const PinholeCamera& cam, const Vec3& p) {
    if (!(p.z > 0.0)) throw std::invalid_argument("project_point: behind camera");
    return {cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy};
}

/// Rigid pose for novel-view rendering: maps camera-frame rays into the scene
/// frame as x_scene = R * x_cam + position, with R given by its columns (the
/// images of the camera axes). Identity + zero offset is the capture camera.
struct CameraPose {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 col_x{1.0, 0.0, 0.0};
    Vec3 col_y{0.0, 1.0, 0.0};
    Vec3 col_z{0.0, 0.0, 1.0};

    Vec3 apply_direction(const Vec3& d) const { return col_x * d.x + col_y * d.y + col_z * d.z; }

    Ray apply(const Ray& r) const {
        return Ray::from_unit(position + apply_direction(r.origin), apply_direction(r.direction));
    }
};

}  // namespace totemkit

#endif
