// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_VOLUME_HPP
#define TOTEMKIT_VOLUME_HPP

#include <optional>
#include <utility>
#include <vector>

#include "totemkit/field.hpp"
#include "totemkit/vec.hpp"

namespace totemkit {

/// Affine map from the camera-space view box onto cube space [-1,1]^3. The
/// view box spans the room laterally and z in [0, depth], so z=0-normalized
/// ray origins land exactly on the cube's z=-1 face.
struct CubeMap {
    Vec3 bmin{-2.5, -2.0, 0.0};
    Vec3 bmax{2.5, 2.0, 6.0};

    Vec3 to_cube(const Vec3& p) const {
        return {2.0 * (p.x - bmin.x) / (bmax.x - bmin.x) - 1.0,
                2.0 * (p.y - bmin.y) / (bmax.y - bmin.y) - 1.0,
                2.0 * (p.z - bmin.z) / (bmax.z - bmin.z) - 1.0};
    }
};

/// A normalized training ray: origin on the camera-space plane z=0, direction
/// scaled to unit z, plus the supervising pixel color.
struct TrainRay {
    Vec3 origin;
    Vec3 direction;
    Vec3 target;
    int totem_id = -1;
    int px = -1, py = -1;
};

/// Shift the origin to the z=0 plane and scale the direction to unit z.
/// Rays that run parallel to (or away from) the image plane are unusable.
inline std::optional<std::pair<Vec3, Vec3>> normalize_exit_ray(const Vec3& origin, const Vec3& direction) {
    if (!(direction.z > 1e-9)) return std::nullopt;
    const Vec3 d{direction.x / direction.z, direction.y / direction.z, 1.0};
    const Vec3 o{origin.x - d.x * origin.z, origin.y - d.y * origin.z, 0.0};
    return std::make_pair(o, d);
}

/// Quadrature layout along a ray: one stratified sample per bin of [near, far].
struct SampleSpec {
    double near = 0.0;
    double far = 6.0;
    int samples = 64;
};

/// Per-sample forward state kept for the backward pass.
struct VolumeSampleState {
    GridFootprint fp;
    double sigma = 0.0;
    Vec3 rgb;
    double alpha = 0.0;
    double transmittance = 1.0;
    double delta = 0.0;
};

struct VolumeWorkspace {
    std::vector<VolumeSampleState> states;
    std::vector<double> ts;
};

/// Volume rendering quadrature: alpha compositing of stratified samples.
/// `jitter(i)` in [0,1) positions the sample inside bin i (0.5 = midpoint).
/// Fills the workspace for a subsequent gradient scatter and returns the color.
template <typename JitterFn>
Vec3 volume_render_ws(const RadianceField& field, const CubeMap& cube, const Vec3& origin,
                      const Vec3& direction, const SampleSpec& spec, JitterFn&& jitter,
                      VolumeWorkspace& ws) {
    const int n = spec.samples;
    ws.states.resize(n);
    ws.ts.resize(n);
    const double h = (spec.far - spec.near) / n;
    for (int i = 0; i < n; ++i) ws.ts[i] = spec.near + (i + jitter(i)) * h;

    Vec3 color{0, 0, 0};
    double transmittance = 1.0;
    for (int i = 0; i < n; ++i) {
        VolumeSampleState& st = ws.states[i];
        st.delta = (i + 1 < n) ? ws.ts[i + 1] - ws.ts[i] : spec.far - ws.ts[i];
        st.transmittance = transmittance;
        const Vec3 pos = origin + direction * ws.ts[i];
        st.fp = field.footprint(cube.to_cube(pos));
        st.sigma = 0.0;
        st.rgb = {0, 0, 0};
        if (st.fp.inside) {
            const double* params = field.params().data();
            for (int k = 0; k < 8; ++k) {
                const double w = st.fp.w[k];
                const int64_t idx = st.fp.idx[k];
                const double* p = params + idx * RadianceField::kChannels;
                st.rgb.x += w * p[0];
                st.rgb.y += w * p[1];
                st.rgb.z += w * p[2];
                st.sigma += w * field.sigma_at_vertex(idx);
            }
        }
        st.alpha = -std::expm1(-st.sigma * st.delta);
        const double w_i = transmittance * st.alpha;
        color += st.rgb * w_i;
        transmittance *= 1.0 - st.alpha;
    }
    return color;
}

/// Evaluation-mode rendering (bin midpoints); optionally returns the
/// per-sample weights w_i = T_i * alpha_i and sample depths.
inline Vec3 volume_render(const RadianceField& field, const CubeMap& cube, const Vec3& origin,
                          const Vec3& direction, const SampleSpec& spec,
                          std::vector<double>* weights_out = nullptr,
                          std::vector<double>* ts_out = nullptr) {
    VolumeWorkspace ws;
    const Vec3 color =
        volume_render_ws(field, cube, origin, direction, spec, [](int) { return 0.5; }, ws);
    if (weights_out) {
        weights_out->resize(ws.states.size());
        for (size_t i = 0; i < ws.states.size(); ++i)
            (*weights_out)[i] = ws.states[i].transmittance * ws.states[i].alpha;
    }
    if (ts_out) *ts_out = ws.ts;
    return color;
}

/// Scatter dL/dparams for one ray into a dense gradient buffer, given the
/// upstream dL/dcolor. Uses the forward state captured by volume_render_ws.
inline void volume_scatter_gradient(const RadianceField& field, const VolumeWorkspace& ws,
                                    const Vec3& dL_dcolor, double* grad) {
    const int n = static_cast<int>(ws.states.size());

    // dL/dalpha_i needs the suffix sum over later samples of w_j * <dL/dC, rgb_j>.
    double suffix = 0.0;
    std::vector<double> dL_dalpha(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        const VolumeSampleState& st = ws.states[i];
        const double g = dot(dL_dcolor, st.rgb);
        const double one_minus_alpha = 1.0 - st.alpha;
        double term = 0.0;
        if (one_minus_alpha > 0.0) term = suffix / one_minus_alpha;
        dL_dalpha[i] = st.transmittance * g - term;
        suffix += st.transmittance * st.alpha * g;
    }

    for (int i = 0; i < n; ++i) {
        const VolumeSampleState& st = ws.states[i];
        if (!st.fp.inside) continue;
        const double w_i = st.transmittance * st.alpha;
        const double dL_dsigma = dL_dalpha[i] * st.delta * (1.0 - st.alpha);
        for (int k = 0; k < 8; ++k) {
            const double w = st.fp.w[k];
            const int64_t idx = st.fp.idx[k];
            double* g = grad + idx * RadianceField::kChannels;
            g[0] += w * w_i * dL_dcolor.x;
            g[1] += w * w_i * dL_dcolor.y;
            g[2] += w * w_i * dL_dcolor.z;
            g[3] += w * field.dsigma_at_vertex(idx) * dL_dsigma;
        }
    }
}

}  // namespace totemkit

#endif
