// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_PREPROCESS_HPP
#define TOTEMKIT_PREPROCESS_HPP

#include <stdexcept>
#include <vector>

#include "totemkit/image.hpp"
#include "totemkit/mask.hpp"
#include "totemkit/optics.hpp"
#include "totemkit/volume.hpp"

namespace totemkit {

struct PreprocessStats {
    int64_t mask_pixels = 0;
    int64_t no_exit_ray = 0;    // TIR or non-forward exit direction
    int64_t filtered_out = 0;   // mapped origin outside the cube by > threshold
    int64_t kept = 0;
};

/// Map every totem-mask pixel to its normalized scene ray: trace the two
/// refractions, shift the origin to z=0 / scale direction to unit z, then drop
/// rays whose cube-mapped origin overflows [-1,1] by more than the threshold
/// in any coordinate (these are the unstable large-refraction-angle rays).
inline std::vector<TrainRay> preprocess_rays(const PinholeCamera& cam,
                                             const std::vector<SphereTotem>& totems,
                                             const std::vector<TotemMask>& masks,
                                             const ImageRGB& image, const CubeMap& cube,
                                             double overflow_threshold,
                                             PreprocessStats* stats = nullptr) {
    if (totems.size() != masks.size())
        throw std::invalid_argument("preprocess_rays: totem/mask count mismatch");
    if (image.width != cam.width || image.height != cam.height)
        throw std::invalid_argument("preprocess_rays: image does not match camera resolution");

    PreprocessStats local;
    std::vector<TrainRay> rays;
    for (size_t j = 0; j < totems.size(); ++j) {
        const ImageGray& m = masks[j].mask;
        for (int y = 0; y < m.height; ++y) {
            for (int x = 0; x < m.width; ++x) {
                if (m.at(x, y) == 0) continue;
                ++local.mask_pixels;
                const auto exit = totem_pixel_to_scene_ray(cam, totems[j], x + 0.5, y + 0.5);
                if (!exit) {
                    ++local.no_exit_ray;
                    continue;
                }
                const auto normalized = normalize_exit_ray(exit->origin, exit->direction);
                if (!normalized) {
                    ++local.no_exit_ray;
                    continue;
                }
                const Vec3 c = cube.to_cube(normalized->first);
                const double limit = 1.0 + overflow_threshold;
                if (std::abs(c.x) > limit || std::abs(c.y) > limit || std::abs(c.z) > limit) {
                    ++local.filtered_out;
                    continue;
                }
                TrainRay r;
                r.origin = normalized->first;
                r.direction = normalized->second;
                r.target = {image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2)};
                r.totem_id = static_cast<int>(j);
                r.px = x;
                r.py = y;
                rays.push_back(r);
                ++local.kept;
            }
        }
    }
    if (stats) *stats = local;
    if (rays.empty()) throw std::runtime_error("preprocess_rays: no trainable rays");
    return rays;
}

}  // namespace totemkit

#endif
