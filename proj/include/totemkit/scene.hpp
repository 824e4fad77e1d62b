// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_SCENE_HPP
#define TOTEMKIT_SCENE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "totemkit/camera.hpp"
#include "totemkit/json_util.hpp"
#include "totemkit/optics.hpp"
#include "totemkit/posefit.hpp"
#include "totemkit/rng.hpp"
#include "totemkit/texture.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

/// Open-fronted box room: interior spans x in [-w/2, w/2], y in [-h/2, h/2],
/// z in [0, depth]. The camera sits at the origin on the open face; the five
/// textured interior faces are back, left, right, floor (y = +h/2, image-down
/// convention) and ceiling.
struct RoomSpec {
    double width = 5.0;
    double height = 4.0;
    double depth = 6.0;
    Texture back, left, right, floor, ceiling;

    Vec3 min_corner() const { return {-width / 2, -height / 2, 0.0}; }
    Vec3 max_corner() const { return {width / 2, height / 2, depth}; }
};

enum class ObjectKind { Box, Sphere };

struct SceneObject {
    ObjectKind kind = ObjectKind::Box;
    Vec3 bmin, bmax;     // box
    Vec3 center;         // sphere
    double radius = 0.0; // sphere
    Texture texture;

    double z_min() const { return kind == ObjectKind::Box ? bmin.z : center.z - radius; }
};

struct SceneSpec {
    RoomSpec room;
    std::vector<SceneObject> objects;
    std::vector<SphereTotem> totems;
    PinholeCamera camera;
    uint64_t seed = 0;

    void validate() const;
};

// --- validation ------------------------------------------------------------

inline void SceneSpec::validate() const {
    camera.validate();
    if (room.width <= 0 || room.height <= 0 || room.depth <= 0)
        throw std::invalid_argument("scene: room dimensions must be positive");
    double totem_z_max = 0.0;
    for (size_t j = 0; j < totems.size(); ++j) {
        const auto& t = totems[j];
        t.validate();
        totem_z_max = std::max(totem_z_max, t.center.z + t.radius);
        if (t.center.z + t.radius >= room.depth)
            throw std::invalid_argument("scene: totem " + std::to_string(j) + " reaches the back wall");
    }
    for (size_t i = 0; i < objects.size(); ++i) {
        const auto& o = objects[i];
        if (o.kind == ObjectKind::Box) {
            if (!(o.bmin.x < o.bmax.x && o.bmin.y < o.bmax.y && o.bmin.z < o.bmax.z))
                throw std::invalid_argument("scene: object " + std::to_string(i) + " box is empty");
        } else if (!(o.radius > 0.0)) {
            throw std::invalid_argument("scene: object " + std::to_string(i) + " radius must be positive");
        }
        if (o.z_min() <= totem_z_max)
            throw std::invalid_argument("scene: object " + std::to_string(i) +
                                        " not strictly behind all totems");
    }
    // Sphere silhouettes under a pinhole are cones about the center direction
    // with half-angle asin(R/L); disjointness is an exact angular test.
    for (size_t a = 0; a < totems.size(); ++a) {
        for (size_t b = a + 1; b < totems.size(); ++b) {
            const Vec3 da = normalized(totems[a].center);
            const Vec3 db = normalized(totems[b].center);
            const double gap = std::acos(std::clamp(dot(da, db), -1.0, 1.0));
            const double cone_a = std::asin(totems[a].radius / norm(totems[a].center));
            const double cone_b = std::asin(totems[b].radius / norm(totems[b].center));
            if (gap <= cone_a + cone_b)
                throw std::invalid_argument("scene: totem silhouettes " + std::to_string(a) + " and " +
                                            std::to_string(b) + " overlap in image space");
        }
    }
}

// --- JSON ------------------------------------------------------------------

inline json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline Vec3 vec3_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument(where + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json texture_to_json(const Texture& t) {
    json j;
    j["kind"] = texture_kind_name(t.kind);
    switch (t.kind) {
        case TextureKind::Solid:
            j["color"] = vec3_to_json(t.color_a);
            break;
        case TextureKind::Checker:
            j["color_a"] = vec3_to_json(t.color_a);
            j["color_b"] = vec3_to_json(t.color_b);
            j["scale"] = t.scale;
            break;
        case TextureKind::Tiles:
            j["scale"] = t.scale;
            j["seed"] = t.seed;
            break;
        case TextureKind::Noise:
            j["color_a"] = vec3_to_json(t.color_a);
            j["color_b"] = vec3_to_json(t.color_b);
            j["scale"] = t.scale;
            j["seed"] = t.seed;
            break;
    }
    return j;
}

inline Texture texture_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument(where + ": expected a texture object with 'kind'");
    Texture t;
    t.kind = texture_kind_from_name(j["kind"].get<std::string>());
    switch (t.kind) {
        case TextureKind::Solid:
            check_fields(j, where, {"kind", "color"});
            t.color_a = vec3_from_json(j["color"], where + ".color");
            break;
        case TextureKind::Checker:
            check_fields(j, where, {"kind", "color_a", "color_b", "scale"});
            t.color_a = vec3_from_json(j["color_a"], where + ".color_a");
            t.color_b = vec3_from_json(j["color_b"], where + ".color_b");
            t.scale = j["scale"].get<double>();
            break;
        case TextureKind::Tiles:
            check_fields(j, where, {"kind", "scale", "seed"});
            t.scale = j["scale"].get<double>();
            t.seed = j["seed"].get<uint64_t>();
            break;
        case TextureKind::Noise:
            check_fields(j, where, {"kind", "color_a", "color_b", "scale", "seed"});
            t.color_a = vec3_from_json(j["color_a"], where + ".color_a");
            t.color_b = vec3_from_json(j["color_b"], where + ".color_b");
            t.scale = j["scale"].get<double>();
            t.seed = j["seed"].get<uint64_t>();
            break;
    }
    if (t.kind != TextureKind::Solid && !(t.scale > 0.0))
        throw std::invalid_argument(where + ": scale must be positive");
    return t;
}

inline json scene_to_json(const SceneSpec& s) {
    json j;
    j["version"] = 1;
    j["seed"] = s.seed;
    j["camera"] = {{"fx", s.camera.fx}, {"fy", s.camera.fy}, {"cx", s.camera.cx},
                   {"cy", s.camera.cy}, {"width", s.camera.width}, {"height", s.camera.height}};
    j["room"] = {{"width", s.room.width},
                 {"height", s.room.height},
                 {"depth", s.room.depth},
                 {"textures",
                  {{"back", texture_to_json(s.room.back)},
                   {"left", texture_to_json(s.room.left)},
                   {"right", texture_to_json(s.room.right)},
                   {"floor", texture_to_json(s.room.floor)},
                   {"ceiling", texture_to_json(s.room.ceiling)}}}};
    j["objects"] = json::array();
    for (const auto& o : s.objects) {
        json jo;
        jo["texture"] = texture_to_json(o.texture);
        if (o.kind == ObjectKind::Box) {
            jo["kind"] = "box";
            jo["min"] = vec3_to_json(o.bmin);
            jo["max"] = vec3_to_json(o.bmax);
        } else {
            jo["kind"] = "sphere";
            jo["center"] = vec3_to_json(o.center);
            jo["radius"] = o.radius;
        }
        j["objects"].push_back(jo);
    }
    j["totems"] = json::array();
    for (const auto& t : s.totems)
        j["totems"].push_back(
            {{"center", vec3_to_json(t.center)}, {"radius", t.radius}, {"ior", t.ior}});
    return j;
}

inline SceneSpec scene_from_json(const json& j) {
    check_version(j, "scene");
    check_fields(j, "scene", {"version", "seed", "camera", "room", "objects", "totems"});
    SceneSpec s;
    s.seed = j["seed"].get<uint64_t>();

    const json& jc = j["camera"];
    check_fields(jc, "scene.camera", {"fx", "fy", "cx", "cy", "width", "height"});
    s.camera = PinholeCamera(jc["fx"].get<double>(), jc["fy"].get<double>(), jc["cx"].get<double>(),
                             jc["cy"].get<double>(), jc["width"].get<int>(), jc["height"].get<int>());

    const json& jr = j["room"];
    check_fields(jr, "scene.room", {"width", "height", "depth", "textures"});
    s.room.width = jr["width"].get<double>();
    s.room.height = jr["height"].get<double>();
    s.room.depth = jr["depth"].get<double>();
    const json& jt = jr["textures"];
    check_fields(jt, "scene.room.textures", {"back", "left", "right", "floor", "ceiling"});
    s.room.back = texture_from_json(jt["back"], "scene.room.textures.back");
    s.room.left = texture_from_json(jt["left"], "scene.room.textures.left");
    s.room.right = texture_from_json(jt["right"], "scene.room.textures.right");
    s.room.floor = texture_from_json(jt["floor"], "scene.room.textures.floor");
    s.room.ceiling = texture_from_json(jt["ceiling"], "scene.room.textures.ceiling");

    for (size_t i = 0; i < j["objects"].size(); ++i) {
        const json& jo = j["objects"][i];
        const std::string where = "scene.objects[" + std::to_string(i) + "]";
        SceneObject o;
        const std::string kind = jo.value("kind", "");
        if (kind == "box") {
            check_fields(jo, where, {"kind", "min", "max", "texture"});
            o.kind = ObjectKind::Box;
            o.bmin = vec3_from_json(jo["min"], where + ".min");
            o.bmax = vec3_from_json(jo["max"], where + ".max");
        } else if (kind == "sphere") {
            check_fields(jo, where, {"kind", "center", "radius", "texture"});
            o.kind = ObjectKind::Sphere;
            o.center = vec3_from_json(jo["center"], where + ".center");
            o.radius = jo["radius"].get<double>();
        } else {
            throw std::invalid_argument(where + ": unknown kind '" + kind + "'");
        }
        o.texture = texture_from_json(jo["texture"], where + ".texture");
        s.objects.push_back(o);
    }

    for (size_t i = 0; i < j["totems"].size(); ++i) {
        const json& jo = j["totems"][i];
        const std::string where = "scene.totems[" + std::to_string(i) + "]";
        check_fields(jo, where, {"center", "radius", "ior"});
        s.totems.push_back(SphereTotem(vec3_from_json(jo["center"], where + ".center"),
                                       jo["radius"].get<double>(), jo["ior"].get<double>()));
    }

    s.validate();
    return s;
}

// --- canned scenes ----------------------------------------------------------

/// The default 4-totem benchmark scene (also shipped as configs/default_scene.json).
inline SceneSpec make_default_scene() {
    SceneSpec s;
    s.seed = 7;
    s.camera = PinholeCamera(140.0, 140.0, 128.0, 128.0, 256, 256);
    s.room.width = 5.0;
    s.room.height = 4.0;
    s.room.depth = 6.0;
    s.room.back = {TextureKind::Tiles, {}, {}, 0.65, 11};
    s.room.left = {TextureKind::Checker, {0.85, 0.25, 0.2}, {0.92, 0.88, 0.8}, 0.8, 0};
    s.room.right = {TextureKind::Checker, {0.2, 0.35, 0.85}, {0.92, 0.88, 0.8}, 0.8, 0};
    s.room.floor = {TextureKind::Noise, {0.45, 0.3, 0.18}, {0.75, 0.62, 0.45}, 0.9, 12};
    s.room.ceiling = {TextureKind::Solid, {0.85, 0.85, 0.88}, {}, 0.5, 0};

    SceneObject box;
    box.kind = ObjectKind::Box;
    box.bmin = {-1.35, 0.7, 3.4};
    box.bmax = {-0.35, 2.0, 4.4};
    box.texture = {TextureKind::Checker, {0.9, 0.75, 0.2}, {0.25, 0.2, 0.1}, 0.33, 0};
    s.objects.push_back(box);

    SceneObject ball;
    ball.kind = ObjectKind::Sphere;
    ball.center = {0.95, 1.5, 4.6};
    ball.radius = 0.5;
    ball.texture = {TextureKind::Solid, {0.15, 0.65, 0.55}, {}, 0.5, 0};
    s.objects.push_back(ball);

    SceneObject slab;
    slab.kind = ObjectKind::Box;
    slab.bmin = {0.2, -0.4, 5.1};
    slab.bmax = {1.9, 0.5, 5.6};
    slab.texture = {TextureKind::Tiles, {}, {}, 0.28, 21};
    s.objects.push_back(slab);

    const double txs[4] = {-0.88, -0.28, 0.28, 0.88};
    for (double x : txs) s.totems.push_back(SphereTotem({x, 0.52, 1.5}, 0.25, 1.5));

    s.validate();
    return s;
}

/// Seeded random benchmark scene in the same family as the default one.
inline SceneSpec make_random_scene(uint64_t seed) {
    auto u = [&](uint64_t k, double lo, double hi) { return lo + (hi - lo) * hash_unit(seed, k); };
    auto color = [&](uint64_t k) {
        return Vec3{0.1 + 0.85 * hash_unit(seed, k, 0), 0.1 + 0.85 * hash_unit(seed, k, 1),
                    0.1 + 0.85 * hash_unit(seed, k, 2)};
    };
    auto wall_texture = [&](uint64_t k) {
        Texture t;
        const double pick = hash_unit(seed, k, 9);
        if (pick < 0.35) {
            t.kind = TextureKind::Tiles;
            t.scale = u(k * 7 + 1, 0.45, 0.8);
            t.seed = hash_counter(seed, k, 2);
        } else if (pick < 0.7) {
            t.kind = TextureKind::Checker;
            t.color_a = color(k * 7 + 2);
            t.color_b = color(k * 7 + 3);
            t.scale = u(k * 7 + 4, 0.5, 0.9);
        } else {
            t.kind = TextureKind::Noise;
            t.color_a = color(k * 7 + 5);
            t.color_b = color(k * 7 + 6);
            t.scale = u(k * 7 + 7, 0.6, 1.1);
            t.seed = hash_counter(seed, k, 3);
        }
        return t;
    };

    SceneSpec s;
    s.seed = seed;
    s.camera = PinholeCamera(140.0, 140.0, 128.0, 128.0, 256, 256);
    s.room.width = u(1, 4.6, 5.4);
    s.room.height = u(2, 3.7, 4.3);
    s.room.depth = u(3, 4.5, 7.5);
    s.room.back = wall_texture(10);
    s.room.left = wall_texture(11);
    s.room.right = wall_texture(12);
    s.room.floor = wall_texture(13);
    s.room.ceiling = wall_texture(14);

    const int n_objects = 2 + static_cast<int>(hash_unit(seed, 20) * 2.0);  // 2..3
    for (int i = 0; i < n_objects; ++i) {
        const uint64_t k = 30 + 10 * static_cast<uint64_t>(i);
        SceneObject o;
        o.texture = wall_texture(k + 5);
        const double z0 = u(k, 3.0, s.room.depth - 1.2);
        if (hash_unit(seed, k + 1) < 0.5) {
            o.kind = ObjectKind::Box;
            const double sx = u(k + 2, 0.5, 1.2), sy = u(k + 3, 0.7, 1.6), sz = u(k + 4, 0.5, 1.0);
            const double cx = u(k + 6, -1.4, 1.4);
            o.bmin = {cx - sx / 2, s.room.height / 2 - sy, z0};
            o.bmax = {cx + sx / 2, s.room.height / 2, z0 + sz};
        } else {
            o.kind = ObjectKind::Sphere;
            o.radius = u(k + 2, 0.3, 0.55);
            o.center = {u(k + 6, -1.3, 1.3), s.room.height / 2 - o.radius, z0 + o.radius};
        }
        s.objects.push_back(o);
    }

    // Four totems in a low row; jitter shrinks until the silhouette-disjointness
    // and in-frame checks pass.
    const double base_x[4] = {-0.88, -0.28, 0.28, 0.88};
    for (double amp = 1.0;; amp *= 0.5) {
        s.totems.clear();
        for (int i = 0; i < 4; ++i) {
            const uint64_t k = 60 + 4 * static_cast<uint64_t>(i);
            const double x = base_x[i] + amp * u(k, -0.03, 0.03);
            const double y = 0.52 + amp * u(k + 1, -0.03, 0.03);
            const double z = 1.5 + amp * u(k + 2, -0.06, 0.06);
            s.totems.push_back(SphereTotem({x, y, z}, 0.25, 1.5));
        }
        try {
            s.validate();
            bool in_frame = true;
            for (const auto& t : s.totems) {
                const BBox box = predicted_bbox(s.camera, t.center, t.radius, 256);
                if (box.u_min < 1 || box.u_max > s.camera.width - 1 || box.v_min < 1 ||
                    box.v_max > s.camera.height - 1)
                    in_frame = false;
            }
            if (in_frame) break;
            if (amp < 1e-3) throw std::runtime_error("scene generator: totems never fit in frame");
        } catch (const std::invalid_argument&) {
            if (amp < 1e-3) throw;
        }
    }
    return s;
}

}  // namespace totemkit

#endif
