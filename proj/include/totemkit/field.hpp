// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_FIELD_HPP
#define TOTEMKIT_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "totemkit/parallel.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double softplus_inverse(double y) { return y > 30.0 ? y : std::log(std::expm1(y)); }

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// Trilinear interpolation footprint of a cube-space point: the 8 lattice
/// vertices and their weights. `inside` is false outside [-1,1]^3 (the field
/// is vacuum there).
struct GridFootprint {
    int64_t idx[8];
    double w[8];
    bool inside = false;
};

/// Emission + density field on a dense res^3 lattice over cube space [-1,1]^3.
/// Per-vertex parameters are (r, g, b, sigma_raw); density is
/// trilinear(softplus(sigma_raw)), so sigma >= 0 everywhere and queries are
/// piecewise-trilinear. Color is interpolated raw.
class RadianceField {
  public:
    static constexpr int kChannels = 4;  // r, g, b, sigma_raw

    explicit RadianceField(int resolution = 64, double rgb_init = 0.5, double sigma_init = 0.05)
        : res_(resolution) {
        if (resolution < 2) throw std::invalid_argument("field: resolution must be >= 2");
        const int64_t n = vertex_count();
        params_.assign(n * kChannels, 0.0);
        const double raw = softplus_inverse(sigma_init);
        for (int64_t v = 0; v < n; ++v) {
            params_[v * kChannels + 0] = rgb_init;
            params_[v * kChannels + 1] = rgb_init;
            params_[v * kChannels + 2] = rgb_init;
            params_[v * kChannels + 3] = raw;
        }
        refresh_activations(1);
    }

    int resolution() const { return res_; }
    int64_t vertex_count() const { return static_cast<int64_t>(res_) * res_ * res_; }
    int64_t param_count() const { return vertex_count() * kChannels; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    double sigma_at_vertex(int64_t v) const { return act_sigma_[v]; }
    double dsigma_at_vertex(int64_t v) const { return act_dsigma_[v]; }

    /// Recompute softplus/sigmoid caches after any parameter change.
    void refresh_activations(int n_threads) {
        const int64_t n = vertex_count();
        act_sigma_.resize(n);
        act_dsigma_.resize(n);
        parallel_chunks(n, kReduceChunks, n_threads, [&](int, int64_t lo, int64_t hi) {
            for (int64_t v = lo; v < hi; ++v) {
                const double raw = params_[v * kChannels + 3];
                act_sigma_[v] = softplus(raw);
                act_dsigma_[v] = sigmoid(raw);
            }
        });
    }

    GridFootprint footprint(const Vec3& cube_pos) const {
        GridFootprint fp;
        if (cube_pos.x < -1.0 || cube_pos.x > 1.0 || cube_pos.y < -1.0 || cube_pos.y > 1.0 ||
            cube_pos.z < -1.0 || cube_pos.z > 1.0) {
            fp.inside = false;
            return fp;
        }
        fp.inside = true;
        const double scale = (res_ - 1) / 2.0;
        double g[3] = {(cube_pos.x + 1.0) * scale, (cube_pos.y + 1.0) * scale,
                       (cube_pos.z + 1.0) * scale};
        int i0[3];
        double f[3];
        for (int a = 0; a < 3; ++a) {
            int i = static_cast<int>(g[a]);
            if (i >= res_ - 1) i = res_ - 2;  // point exactly on the upper boundary
            i0[a] = i;
            f[a] = g[a] - i;
        }
        const int64_t sx = 1, sy = res_, sz = static_cast<int64_t>(res_) * res_;
        const int64_t base = i0[0] * sx + i0[1] * sy + i0[2] * sz;
        const double fx = f[0], fy = f[1], fz = f[2];
        fp.idx[0] = base;
        fp.idx[1] = base + sx;
        fp.idx[2] = base + sy;
        fp.idx[3] = base + sx + sy;
        fp.idx[4] = base + sz;
        fp.idx[5] = base + sx + sz;
        fp.idx[6] = base + sy + sz;
        fp.idx[7] = base + sx + sy + sz;
        fp.w[0] = (1 - fx) * (1 - fy) * (1 - fz);
        fp.w[1] = fx * (1 - fy) * (1 - fz);
        fp.w[2] = (1 - fx) * fy * (1 - fz);
        fp.w[3] = fx * fy * (1 - fz);
        fp.w[4] = (1 - fx) * (1 - fy) * fz;
        fp.w[5] = fx * (1 - fy) * fz;
        fp.w[6] = (1 - fx) * fy * fz;
        fp.w[7] = fx * fy * fz;
        return fp;
    }

    /// (rgb, sigma) at a cube-space position; the direction argument is part
    /// of the query contract but unused by the grid representation.
    struct Sample {
        Vec3 rgb{0, 0, 0};
        double sigma = 0.0;
    };

    Sample query(const Vec3& cube_pos, const Vec3& /*direction*/ = {0, 0, 1}) const {
        Sample out;
        const GridFootprint fp = footprint(cube_pos);
        if (!fp.inside) return out;
        for (int k = 0; k < 8; ++k) {
            const double w = fp.w[k];
            const double* p = &params_[fp.idx[k] * kChannels];
            out.rgb.x += w * p[0];
            out.rgb.y += w * p[1];
            out.rgb.z += w * p[2];
            out.sigma += w * act_sigma_[fp.idx[k]];
        }
        return out;
    }

  private:
    int res_;
    std::vector<double> params_;
    std::vector<double> act_sigma_;
    std::vector<double> act_dsigma_;
};

}  // namespace totemkit

#endif
