// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_RENDER_HPP
#define TOTEMKIT_RENDER_HPP

#include <limits>
#include <optional>
#include <vector>

#include "totemkit/image.hpp"
#include "totemkit/mask.hpp"
#include "totemkit/parallel.hpp"
#include "totemkit/scene.hpp"

namespace totemkit {

struct SurfaceHit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 point;
    Vec3 color;

    bool valid() const { return std::isfinite(t); }
};

namespace detail {

// Ray vs axis-aligned rectangle in the plane axis=plane_value, bounded on the
// two remaining axes. Surfaces are two-sided.
inline std::optional<double> hit_rect(const Ray& ray, int axis, double plane_value, double lo0,
                                      double hi0, double lo1, double hi1) {
    const double dv = ray.direction[axis];
    if (std::abs(dv) < 1e-15) return std::nullopt;
    const double t = (plane_value - ray.origin[axis]) / dv;
    if (t <= kIntersectEps) return std::nullopt;
    const int a0 = (axis + 1) % 3, a1 = (axis + 2) % 3;
    const Vec3 p = ray.at(t);
    if (p[a0] < lo0 || p[a0] > hi0 || p[a1] < lo1 || p[a1] > hi1) return std::nullopt;
    return t;
}

inline void consider_room(const RoomSpec& room, const Ray& ray, SurfaceHit& best) {
    const double hw = room.width / 2, hh = room.height / 2, d = room.depth;
    struct Face {
        int axis;
        double plane;
        const Texture* tex;
    };
    const Face faces[5] = {{2, d, &room.back},
                           {0, -hw, &room.left},
                           {0, hw, &room.right},
                           {1, hh, &room.floor},
                           {1, -hh, &room.ceiling}};
    for (const Face& f : faces) {
        std::optional<double> t;
        if (f.axis == 2)
            t = hit_rect(ray, 2, f.plane, -hw, hw, -hh, hh);  // bounded in x, y
        else if (f.axis == 0)
            t = hit_rect(ray, 0, f.plane, -hh, hh, 0.0, d);  // bounded in y, z
        else
            t = hit_rect(ray, 1, f.plane, 0.0, d, -hw, hw);  // bounded in z, x
        if (t && *t < best.t) {
            const Vec3 p = ray.at(*t);
            Vec3 c;
            if (f.axis == 2)
                c = f.tex->sample(p.x, p.y);
            else if (f.axis == 0)
                c = f.tex->sample(p.z, p.y);
            else
                c = f.tex->sample(p.x, p.z);
            best = {*t, p, c};
        }
    }
}

inline void consider_box(const SceneObject& box, const Ray& ray, SurfaceHit& best) {
    // Slab test; tracks which axis bounds the entry to pick the face texture plane.
    double t_near = kIntersectEps, t_far = std::numeric_limits<double>::infinity();
    int near_axis = -1;
    bool near_is_min = false;
    for (int a = 0; a < 3; ++a) {
        const double dv = ray.direction[a], ov = ray.origin[a];
        const double lo = box.bmin[a], hi = box.bmax[a];
        if (std::abs(dv) < 1e-15) {
            if (ov < lo || ov > hi) return;
            continue;
        }
        double t0 = (lo - ov) / dv, t1 = (hi - ov) / dv;
        bool is_min = true;
        if (t0 > t1) {
            std::swap(t0, t1);
            is_min = false;
        }
        if (t0 > t_near) {
            t_near = t0;
            near_axis = a;
            near_is_min = is_min;
        }
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return;
    }
    if (near_axis < 0 || t_near >= best.t) return;  // origin inside the box: ignore
    const Vec3 p = ray.at(t_near);
    (void)near_is_min;
    Vec3 c;
    if (near_axis == 0)
        c = box.texture.sample(p.z, p.y);
    else if (near_axis == 1)
        c = box.texture.sample(p.x, p.z);
    else
        c = box.texture.sample(p.x, p.y);
    best = {t_near, p, c};
}

inline void consider_sphere(const SceneObject& sph, const Ray& ray, SurfaceHit& best) {
    const Vec3 oc = ray.origin - sph.center;
    const double b = 2.0 * dot(oc, ray.direction);
    const double c = norm_sq(oc) - sph.radius * sph.radius;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return;
    const double sq = std::sqrt(disc);
    double t = (-b - sq) / 2.0;
    if (t <= kIntersectEps) t = (-b + sq) / 2.0;
    if (t <= kIntersectEps || t >= best.t) return;
    const Vec3 p = ray.at(t);
    const Vec3 n = (p - sph.center) / sph.radius;
    // Spherical parameterization scaled to surface meters.
    const double s_coord = std::atan2(n.x, n.z) * sph.radius;
    const double t_coord = std::acos(std::clamp(n.y, -1.0, 1.0)) * sph.radius;
    best = {t, p, sph.texture.sample(s_coord, t_coord)};
}

}  // namespace detail

/// First scene surface (room walls + objects, not totems) hit by the ray.
inline SurfaceHit shade_scene(const SceneSpec& spec, const Ray& ray) {
    SurfaceHit best;
    detail::consider_room(spec.room, ray, best);
    for (const auto& o : spec.objects) {
        if (o.kind == ObjectKind::Box)
            detail::consider_box(o, ray, best);
        else
            detail::consider_sphere(o, ray, best);
    }
    return best;
}

/// Everything the simulator knows about one rendered frame.
struct RenderBundle {
    ImageRGB image;
    std::vector<TotemMask> totem_masks;
    std::vector<Vec3> gt_poses;
    SceneSpec spec;
};

inline Vec3 shade_pixel(const SceneSpec& spec, const Ray& ray) {
    // Nearest totem wins the pixel; spec validation guarantees at most one can.
    int totem_idx = -1;
    double totem_t = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < spec.totems.size(); ++j) {
        if (const auto hit = intersect(spec.totems[j], ray); hit && hit->t < totem_t) {
            totem_t = hit->t;
            totem_idx = static_cast<int>(j);
        }
    }
    if (totem_idx >= 0) {
        const auto out = trace_through_totem(spec.totems[totem_idx], ray);
        if (!out) return {0, 0, 0};  // total internal reflection
        const SurfaceHit hit = shade_scene(spec, *out);
        return hit.valid() ? hit.color : Vec3{0, 0, 0};
    }
    const SurfaceHit hit = shade_scene(spec, ray);
    return hit.valid() ? hit.color : Vec3{0, 0, 0};
}

/// Forward render: emissive texture visibility, one primary ray per pixel
/// center, refraction through totems, exact per-totem masks.
inline RenderBundle render(const SceneSpec& spec, int n_threads = 0) {
    spec.validate();
    const PinholeCamera& cam = spec.camera;
    RenderBundle bundle;
    bundle.spec = spec;
    bundle.image = ImageRGB(cam.width, cam.height, 3);
    for (size_t j = 0; j < spec.totems.size(); ++j) {
        bundle.totem_masks.push_back(TotemMask{static_cast<int>(j), ImageGray(cam.width, cam.height, 1), {}});
        bundle.gt_poses.push_back(spec.totems[j].center);
    }

    parallel_for(cam.height, n_threads, [&](int64_t y) {
        for (int x = 0; x < cam.width; ++x) {
            const Ray ray = pixel_to_ray(cam, x + 0.5, y + 0.5);
            const Vec3 c = shade_pixel(spec, ray);
            bundle.image.at(x, static_cast<int>(y), 0) = std::clamp(c.x, 0.0, 1.0);
            bundle.image.at(x, static_cast<int>(y), 1) = std::clamp(c.y, 0.0, 1.0);
            bundle.image.at(x, static_cast<int>(y), 2) = std::clamp(c.z, 0.0, 1.0);
            for (size_t j = 0; j < spec.totems.size(); ++j)
                if (intersect(spec.totems[j], ray))
                    bundle.totem_masks[j].mask.at(x, static_cast<int>(y)) = 255;
        }
    });

    for (auto& m : bundle.totem_masks) m.boundary = trace_boundary(m.mask);
    return bundle;
}

/// Same shading rule from an arbitrary pinhole pose.
inline ImageRGB render_novel_view(const SceneSpec& spec, const PinholeCamera& cam,
                                  const CameraPose& pose = {}, int n_threads = 0) {
    cam.validate();
    ImageRGB img(cam.width, cam.height, 3);
    parallel_for(cam.height, n_threads, [&](int64_t y) {
        for (int x = 0; x < cam.width; ++x) {
            const Ray ray = pose.apply(pixel_to_ray(cam, x + 0.5, y + 0.5));
            const Vec3 c = shade_pixel(spec, ray);
            img.at(x, static_cast<int>(y), 0) = std::clamp(c.x, 0.0, 1.0);
            img.at(x, static_cast<int>(y), 1) = std::clamp(c.y, 0.0, 1.0);
            img.at(x, static_cast<int>(y), 2) = std::clamp(c.z, 0.0, 1.0);
        }
    });
    return img;
}

}  // namespace totemkit

#endif
