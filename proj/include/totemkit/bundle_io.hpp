// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_BUNDLE_IO_HPP
#define TOTEMKIT_BUNDLE_IO_HPP

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "totemkit/json_util.hpp"
#include "totemkit/png_io.hpp"
#include "totemkit/render.hpp"
#include "totemkit/volume.hpp"

namespace totemkit {

namespace fs = std::filesystem;

inline std::string mask_filename(int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "mask_%02d.png", j);
    return buf;
}

/// Bundle directory layout: scene.json, image.png (16-bit RGB), mask_NN.png
/// (8-bit gray), poses.json. Tampered bundles add gt_mask.png + manip_applied.json.
inline void write_bundle(const std::string& dir, const RenderBundle& bundle) {
    fs::create_directories(dir);
    save_json_file(dir + "/scene.json", scene_to_json(bundle.spec));
    write_png_rgb16(dir + "/image.png", bundle.image);
    for (size_t j = 0; j < bundle.totem_masks.size(); ++j)
        write_png_gray8(dir + "/" + mask_filename(static_cast<int>(j)), bundle.totem_masks[j].mask);
    json poses;
    poses["version"] = 1;
    poses["totems"] = json::array();
    for (size_t j = 0; j < bundle.gt_poses.size(); ++j)
        poses["totems"].push_back({{"center", vec3_to_json(bundle.gt_poses[j])},
                                   {"radius", bundle.spec.totems[j].radius},
                                   {"ior", bundle.spec.totems[j].ior}});
    save_json_file(dir + "/poses.json", poses);
}

inline RenderBundle read_bundle(const std::string& dir) {
    RenderBundle bundle;
    bundle.spec = scene_from_json(load_json_file(dir + "/scene.json"));
    bundle.image = read_png_rgb(dir + "/image.png");
    for (size_t j = 0; j < bundle.spec.totems.size(); ++j) {
        const std::string path = dir + "/" + mask_filename(static_cast<int>(j));
        TotemMask m;
        m.totem_id = static_cast<int>(j);
        m.mask = read_png_gray(path);
        m.boundary = trace_boundary(m.mask);
        bundle.totem_masks.push_back(std::move(m));
    }
    const json poses = load_json_file(dir + "/poses.json");
    check_version(poses, "poses");
    for (const auto& jt : poses["totems"])
        bundle.gt_poses.push_back(vec3_from_json(jt["center"], "poses.totems.center"));
    return bundle;
}

/// The cube-space affine map implied by a scene: room lateral extents, z from
/// the camera plane to the back wall.
inline CubeMap scene_cube_map(const SceneSpec& spec) {
    CubeMap cube;
    cube.bmin = {-spec.room.width / 2, -spec.room.height / 2, 0.0};
    cube.bmax = {spec.room.width / 2, spec.room.height / 2, spec.room.depth};
    return cube;
}

}  // namespace totemkit

#endif
