// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_TEXTURE_HPP
#define TOTEMKIT_TEXTURE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "totemkit/rng.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

enum class TextureKind { Solid, Checker, Tiles, Noise };

inline int64_t floor_div_cell(double v, double scale) {
    return static_cast<int64_t>(std::floor(v / scale));
}

/// Procedural emissive texture over a 2D surface parameterization in meters.
/// Deterministic in (kind, colors, scale, seed); no image assets involved.
struct Texture {
    TextureKind kind = TextureKind::Solid;
    Vec3 color_a{0.5, 0.5, 0.5};
    Vec3 color_b{0.0, 0.0, 0.0};
    double scale = 0.5;
    uint64_t seed = 0;

    Vec3 sample(double s, double t) const {
        switch (kind) {
            case TextureKind::Solid:
                return color_a;
            case TextureKind::Checker: {
                const int64_t cs = floor_div_cell(s, scale);
                const int64_t ct = floor_div_cell(t, scale);
                return ((cs + ct) & 1) == 0 ? color_a : color_b;
            }
            case TextureKind::Tiles: {
                const uint64_t cs = static_cast<uint64_t>(floor_div_cell(s, scale));
                const uint64_t ct = static_cast<uint64_t>(floor_div_cell(t, scale));
                return {0.05 + 0.9 * hash_unit(seed, cs, ct, 0), 0.05 + 0.9 * hash_unit(seed, cs, ct, 1),
                        0.05 + 0.9 * hash_unit(seed, cs, ct, 2)};
            }
            case TextureKind::Noise: {
                const double v = value_noise(s / scale, t / scale);
                return color_a * (1.0 - v) + color_b * v;
            }
        }
        throw std::logic_error("texture: bad kind");
    }

  private:
    double lattice(int64_t i, int64_t j) const {
        return hash_unit(seed, static_cast<uint64_t>(i), static_cast<uint64_t>(j));
    }

    double value_noise(double x, double y) const {
        const int64_t x0 = static_cast<int64_t>(std::floor(x));
        const int64_t y0 = static_cast<int64_t>(std::floor(y));
        const double fx = x - std::floor(x);
        const double fy = y - std::floor(y);
        // smoothstep fade
        const double ux = fx * fx * (3.0 - 2.0 * fx);
        const double uy = fy * fy * (3.0 - 2.0 * fy);
        const double v00 = lattice(x0, y0), v10 = lattice(x0 + 1, y0);
        const double v01 = lattice(x0, y0 + 1), v11 = lattice(x0 + 1, y0 + 1);
        return (v00 * (1 - ux) + v10 * ux) * (1 - uy) + (v01 * (1 - ux) + v11 * ux) * uy;
    }
};

inline std::string texture_kind_name(TextureKind k) {
    switch (k) {
        case TextureKind::Solid: return "solid";
        case TextureKind::Checker: return "checker";
        case TextureKind::Tiles: return "tiles";
        case TextureKind::Noise: return "noise";
    }
    throw std::logic_error("texture: bad kind");
}

inline TextureKind texture_kind_from_name(const std::string& name) {
    if (name == "solid") return TextureKind::Solid;
    if (name == "checker") return TextureKind::Checker;
    if (name == "tiles") return TextureKind::Tiles;
    if (name == "noise") return TextureKind::Noise;
    throw std::invalid_argument("texture: unknown kind '" + name + "'");
}

}  // namespace totemkit

#endif
