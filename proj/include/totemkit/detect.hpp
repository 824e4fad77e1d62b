// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_DETECT_HPP
#define TOTEMKIT_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "totemkit/field.hpp"
#include "totemkit/image.hpp"
#include "totemkit/json_util.hpp"
#include "totemkit/mask.hpp"
#include "totemkit/render.hpp"
#include "totemkit/rng.hpp"
#include "totemkit/volume.hpp"

namespace totemkit {

// --- manipulations -----------------------------------------------------------

enum class ManipKind { ColorPatch, Splice };

/// An evaluation-time manipulation. The region is a rectangle or "auto":
/// auto color patches land in the band above the totems, auto splices use the
/// pixels that differ after the scene edit (outside the totem views).
struct Manipulation {
    ManipKind kind = ManipKind::ColorPatch;
    bool auto_region = true;
    int rx = 0, ry = 0, rw = 0, rh = 0;
    std::optional<Vec3> color;          // color patch payload; random when absent
    std::string splice_op = "remove_object";
    int splice_index = 0;
};

inline Manipulation manipulation_from_json(const json& j) {
    check_version(j, "manip");
    check_fields(j, "manip", {"version", "kind"}, {"region", "color", "edit"});
    Manipulation m;
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "color_patch")
        m.kind = ManipKind::ColorPatch;
    else if (kind == "splice")
        m.kind = ManipKind::Splice;
    else
        throw std::invalid_argument("manip: unknown kind '" + kind + "'");

    if (j.contains("region") && !j["region"].is_string()) {
        const json& r = j["region"];
        if (!r.is_array() || r.size() != 4)
            throw std::invalid_argument("manip.region: expected [x, y, w, h] or \"auto\"");
        m.auto_region = false;
        m.rx = r[0].get<int>();
        m.ry = r[1].get<int>();
        m.rw = r[2].get<int>();
        m.rh = r[3].get<int>();
        if (m.rw < 0 || m.rh < 0) throw std::invalid_argument("manip.region: negative size");
    }
    if (j.contains("color")) m.color = vec3_from_json(j["color"], "manip.color");
    if (j.contains("edit")) {
        const json& e = j["edit"];
        check_fields(e, "manip.edit", {"op", "index"});
        m.splice_op = e["op"].get<std::string>();
        m.splice_index = e["index"].get<int>();
        if (m.splice_op != "remove_object")
            throw std::invalid_argument("manip.edit: unknown op '" + m.splice_op + "'");
    }
    return m;
}

inline json manipulation_to_json(const Manipulation& m) {
    json j;
    j["version"] = 1;
    j["kind"] = m.kind == ManipKind::ColorPatch ? "color_patch" : "splice";
    if (m.auto_region)
        j["region"] = "auto";
    else
        j["region"] = json::array({m.rx, m.ry, m.rw, m.rh});
    if (m.color) j["color"] = vec3_to_json(*m.color);
    if (m.kind == ManipKind::Splice) j["edit"] = {{"op", m.splice_op}, {"index", m.splice_index}};
    return j;
}

/// Lowest mask row over all totems: the patch grid lives strictly above it.
inline int totem_top_row(const std::vector<TotemMask>& masks) {
    int top = masks.empty() ? 0 : masks[0].mask.height;
    for (const auto& m : masks)
        for (int y = 0; y < m.mask.height; ++y) {
            bool any = false;
            for (int x = 0; x < m.mask.width; ++x)
                if (m.mask.at(x, y)) {
                    any = true;
                    break;
                }
            if (any) {
                top = std::min(top, y);
                break;
            }
        }
    return top;
}

struct ManipulationResult {
    ImageRGB image;
    ImageGray gt_mask;
    json applied;  // the concrete manipulation (auto fields resolved)
};

/// Apply a manipulation to a rendered bundle's image. Totem pixels are
/// untouchable: a region overlapping any totem mask is an error.
inline ManipulationResult apply_manipulation(const RenderBundle& bundle, const Manipulation& manip,
                                             uint64_t seed, int n_threads = 0) {
    const ImageRGB& image = bundle.image;
    const int width = image.width, height = image.height;

    auto in_totem = [&](int x, int y) {
        for (const auto& m : bundle.totem_masks)
            if (m.mask.at(x, y)) return true;
        return false;
    };

    ManipulationResult out;
    out.image = image;
    out.gt_mask = ImageGray(width, height, 1, 0);

    ImageGray region(width, height, 1, 0);
    int rx = manip.rx, ry = manip.ry, rw = manip.rw, rh = manip.rh;

    if (manip.kind == ManipKind::ColorPatch) {
        if (manip.auto_region) {
            const int band = totem_top_row(bundle.totem_masks);
            rw = 48 + static_cast<int>(hash_unit(seed, 1) * 25.0);
            rh = 48 + static_cast<int>(hash_unit(seed, 2) * 25.0);
            const int x_lo = 16, x_hi = width - 16 - rw;
            const int y_lo = 12, y_hi = band - 12 - rh;
            if (x_hi < x_lo || y_hi < y_lo)
                throw std::runtime_error("apply_manipulation: no room above the totems for a patch");
            rx = x_lo + static_cast<int>(hash_unit(seed, 3) * (x_hi - x_lo + 1));
            ry = y_lo + static_cast<int>(hash_unit(seed, 4) * (y_hi - y_lo + 1));
        }
        if (rx < 0 || ry < 0 || rx + rw > width || ry + rh > height)
            throw std::invalid_argument("apply_manipulation: region outside image bounds");
        for (int y = ry; y < ry + rh; ++y)
            for (int x = rx; x < rx + rw; ++x) {
                if (in_totem(x, y))
                    throw std::invalid_argument("apply_manipulation: would tamper totem view");
                region.at(x, y) = 255;
            }
        const Vec3 color = manip.color ? *manip.color
                                       : Vec3{0.05 + 0.9 * hash_unit(seed, 11),
                                              0.05 + 0.9 * hash_unit(seed, 12),
                                              0.05 + 0.9 * hash_unit(seed, 13)};
        for (int y = ry; y < ry + rh; ++y)
            for (int x = rx; x < rx + rw; ++x) {
                out.image.at(x, y, 0) = std::clamp(color.x, 0.0, 1.0);
                out.image.at(x, y, 1) = std::clamp(color.y, 0.0, 1.0);
                out.image.at(x, y, 2) = std::clamp(color.z, 0.0, 1.0);
            }
        out.applied = manipulation_to_json(manip);
        out.applied["region"] = json::array({rx, ry, rw, rh});
        out.applied["color"] = vec3_to_json(color);
    } else {
        // Splice: re-render with the edit applied, then copy the changed
        // pixels (or the requested rectangle) from the second render.
        SceneSpec edited = bundle.spec;
        if (manip.splice_index < 0 || manip.splice_index >= static_cast<int>(edited.objects.size()))
            throw std::invalid_argument("apply_manipulation: splice object index out of range");
        edited.objects.erase(edited.objects.begin() + manip.splice_index);
        const ImageRGB second = render(edited, n_threads).image;

        auto differs = [&](int x, int y) {
            for (int c = 0; c < 3; ++c)
                if (second.at(x, y, c) != image.at(x, y, c)) return true;
            return false;
        };

        if (manip.auto_region) {
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x)
                    if (differs(x, y) && !in_totem(x, y)) region.at(x, y) = 255;
        } else {
            if (rx < 0 || ry < 0 || rx + rw > width || ry + rh > height)
                throw std::invalid_argument("apply_manipulation: region outside image bounds");
            for (int y = ry; y < ry + rh; ++y)
                for (int x = rx; x < rx + rw; ++x) {
                    if (in_totem(x, y))
                        throw std::invalid_argument("apply_manipulation: would tamper totem view");
                    region.at(x, y) = 255;
                }
        }
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (region.at(x, y))
                    for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = second.at(x, y, c);
        out.applied = manipulation_to_json(manip);
    }

    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            bool diff = false;
            for (int c = 0; c < 3; ++c)
                if (out.image.at(x, y, c) != image.at(x, y, c)) diff = true;
            if (diff) out.gt_mask.at(x, y) = 255;
        }
    return out;
}

// --- protected region ----------------------------------------------------------

struct ProtectedRegion {
    ImageGray mask;
    std::vector<std::pair<double, double>> hull;  // pixel coordinates, convex
};

namespace detail {

inline double cross2(const std::pair<double, double>& o, const std::pair<double, double>& a,
                     const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

/// Andrew's monotone chain; returns the hull in counter-clockwise order.
inline std::vector<std::pair<double, double>> convex_hull(
    std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<std::pair<double, double>> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline bool point_in_convex_hull(const std::vector<std::pair<double, double>>& hull, double x,
                                 double y) {
    const size_t n = hull.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % n];
        if (cross2(a, b, {x, y}) < 0) return false;  // CCW hull: inside is left of every edge
    }
    return true;
}

/// Box filter of the given (possibly even) width with zero padding, via a
/// summed-area table. An even width anchors as [i - w/2, i + w/2 - 1].
inline ImageF box_filter(const ImageF& in, int width_px) {
    const int lo = width_px / 2;
    const int hi = width_px - lo - 1;
    const int w = in.width, h = in.height;
    std::vector<double> sat(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    auto sat_at = [&](int x, int y) -> double& { return sat[static_cast<size_t>(y) * (w + 1) + x]; };
    for (int y = 1; y <= h; ++y)
        for (int x = 1; x <= w; ++x)
            sat_at(x, y) =
                in.at(x - 1, y - 1) + sat_at(x - 1, y) + sat_at(x, y - 1) - sat_at(x - 1, y - 1);
    ImageF out(w, h, 1, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - lo), x1 = std::min(w - 1, x + hi);
            const int y0 = std::max(0, y - lo), y1 = std::min(h - 1, y + hi);
            out.at(x, y) =
                sat_at(x1 + 1, y1 + 1) - sat_at(x0, y1 + 1) - sat_at(x1 + 1, y0) + sat_at(x0, y0);
        }
    return out;
}

}  // namespace detail

/// Build the protected region: project each training ray's argmax-weight
/// sample point, accumulate per-pixel counts, box-filter (width 30, zero
/// padded), threshold at 10% of the maximum response, and take the filled
/// convex hull.
inline ProtectedRegion protected_region(const RadianceField& field, const std::vector<TrainRay>& rays,
                                        const PinholeCamera& cam, const CubeMap& cube,
                                        const SampleSpec& sspec, int box_width = 30,
                                        double threshold_frac = 0.10, int n_threads = 0) {
    ImageF counts(cam.width, cam.height, 1, 0.0);
    std::vector<Vec3> points(rays.size(), Vec3{0, 0, -1});

    parallel_for(static_cast<int64_t>(rays.size()), n_threads, [&](int64_t i) {
        std::vector<double> weights, ts;
        volume_render(field, cube, rays[i].origin, rays[i].direction, sspec, &weights, &ts);
        double best_w = 0.0;
        int best = -1;
        for (size_t k = 0; k < weights.size(); ++k)
            if (weights[k] > best_w) {
                best_w = weights[k];
                best = static_cast<int>(k);
            }
        if (best >= 0) points[i] = rays[i].origin + rays[i].direction * ts[best];
    });

    int64_t n_points = 0;
    for (const auto& p : points) {
        if (p.z <= 0.0) continue;
        const auto [u, v] = project_point(cam, p);
        const int x = static_cast<int>(std::floor(u));
        const int y = static_cast<int>(std::floor(v));
        if (counts.contains(x, y)) {
            counts.at(x, y) += 1.0;
            ++n_points;
        }
    }
    if (n_points == 0) throw std::runtime_error("protected_region: field untrained (all weights zero)");

    const ImageF filtered = detail::box_filter(counts, box_width);
    double max_resp = 0.0;
    for (const double v : filtered.data) max_resp = std::max(max_resp, v);
    const double threshold = threshold_frac * max_resp;

    std::vector<std::pair<double, double>> above;
    for (int y = 0; y < filtered.height; ++y)
        for (int x = 0; x < filtered.width; ++x)
            if (filtered.at(x, y) > threshold) above.emplace_back(x, y);

    ProtectedRegion region;
    region.mask = ImageGray(cam.width, cam.height, 1, 0);
    region.hull = detail::convex_hull(above);
    if (region.hull.size() < 3) {
        for (const auto& [x, y] : above) region.mask.at(static_cast<int>(x), static_cast<int>(y)) = 255;
        return region;
    }
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x)
            if (detail::point_in_convex_hull(region.hull, x, y)) region.mask.at(x, y) = 255;
    return region;
}

// --- heatmap -------------------------------------------------------------------

struct Heatmap {
    ImageF raw;         // patch-summed L1, zero outside the region
    ImageF normalized;  // min-max over region pixels
};

/// Patch-wise L1 inconsistency: sum of |I - C| over the (2K-1)^2 window
/// around each region pixel, clipped at the image border.
inline Heatmap inconsistency_heatmap(const ImageRGB& image, const ImageRGB& reconstruction,
                                     const ImageGray& region, int patch_k = 64) {
    if (!image.same_shape(reconstruction))
        throw std::invalid_argument("inconsistency_heatmap: shape mismatch");
    if (region.width != image.width || region.height != image.height)
        throw std::invalid_argument("inconsistency_heatmap: region shape mismatch");
    const int w = image.width, h = image.height;

    ImageF absdiff(w, h, 1, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += std::abs(image.at(x, y, c) - reconstruction.at(x, y, c));
            absdiff.at(x, y) = s;
        }

    std::vector<double> sat(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    auto sat_at = [&](int x, int y) -> double& { return sat[static_cast<size_t>(y) * (w + 1) + x]; };
    for (int y = 1; y <= h; ++y)
        for (int x = 1; x <= w; ++x)
            sat_at(x, y) =
                absdiff.at(x - 1, y - 1) + sat_at(x - 1, y) + sat_at(x, y - 1) - sat_at(x - 1, y - 1);

    Heatmap out;
    out.raw = ImageF(w, h, 1, 0.0);
    out.normalized = ImageF(w, h, 1, 0.0);
    double lo = 1e300, hi = -1e300;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!region.at(x, y)) continue;
            const int x0 = std::max(0, x - patch_k + 1), x1 = std::min(w - 1, x + patch_k - 1);
            const int y0 = std::max(0, y - patch_k + 1), y1 = std::min(h - 1, y + patch_k - 1);
            const double v =
                sat_at(x1 + 1, y1 + 1) - sat_at(x0, y1 + 1) - sat_at(x1 + 1, y0) + sat_at(x0, y0);
            out.raw.at(x, y) = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi > lo) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (region.at(x, y)) out.normalized.at(x, y) = (out.raw.at(x, y) - lo) / (hi - lo);
    }
    return out;
}

// --- patch-level average precision ----------------------------------------------

struct PatchScore {
    int u0 = 0, v0 = 0;
    double score = 0.0;
    bool label = false;
};

struct PatchApResult {
    std::optional<double> ap;  // absent when no patch is positive
    double naive_baseline = 0.0;
    std::vector<PatchScore> patches;
};

/// Stepwise precision-recall AP over ranked scores (ties form one threshold
/// group), the "every unique score is a threshold" convention.
inline double average_precision(std::vector<std::pair<double, bool>> scored) {
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    int64_t positives = 0;
    for (const auto& s : scored) positives += s.second ? 1 : 0;
    if (positives == 0) throw std::invalid_argument("average_precision: no positives");

    double ap = 0.0;
    double prev_recall = 0.0;
    int64_t tp = 0, seen = 0;
    size_t i = 0;
    while (i < scored.size()) {
        size_t j = i;
        while (j < scored.size() && scored[j].first == scored[i].first) ++j;
        for (size_t k = i; k < j; ++k) {
            ++seen;
            tp += scored[k].second ? 1 : 0;
        }
        const double recall = static_cast<double>(tp) / positives;
        const double precision = static_cast<double>(tp) / seen;
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return ap;
}

/// 30x30 grid of 64x64 patches evenly spaced over the image band above the
/// totems; keep patches overlapping the protected region, score by mean
/// heatmap value, label by >10% manipulated pixels.
inline PatchApResult patch_ap(const ImageF& heatmap, const ImageGray& gt_mask,
                              const ImageGray& region, int band_v_limit, int patch_size = 64,
                              int grid_n = 30, double label_frac = 0.10) {
    const int w = heatmap.width, h = heatmap.height;
    if (gt_mask.width != w || gt_mask.height != h || region.width != w || region.height != h)
        throw std::invalid_argument("patch_ap: shape mismatch");
    if (band_v_limit > h) band_v_limit = h;
    if (w < patch_size || band_v_limit < patch_size)
        throw std::invalid_argument("patch_ap: zero kept patches (band too small)");

    PatchApResult out;
    for (int gy = 0; gy < grid_n; ++gy) {
        for (int gx = 0; gx < grid_n; ++gx) {
            const int u0 = static_cast<int>(
                std::lround(static_cast<double>(gx) * (w - patch_size) / (grid_n - 1)));
            const int v0 = static_cast<int>(std::lround(static_cast<double>(gy) *
                                                        (band_v_limit - patch_size) / (grid_n - 1)));
            bool overlaps = false;
            int64_t manip = 0;
            double score_sum = 0.0;
            for (int y = v0; y < v0 + patch_size; ++y)
                for (int x = u0; x < u0 + patch_size; ++x) {
                    if (region.at(x, y)) overlaps = true;
                    if (gt_mask.at(x, y)) ++manip;
                    score_sum += heatmap.at(x, y);
                }
            if (!overlaps) continue;
            PatchScore p;
            p.u0 = u0;
            p.v0 = v0;
            p.score = score_sum / (static_cast<double>(patch_size) * patch_size);
            p.label = manip > label_frac * patch_size * patch_size;
            out.patches.push_back(p);
        }
    }
    if (out.patches.empty()) throw std::invalid_argument("patch_ap: zero kept patches");

    int64_t positives = 0;
    for (const auto& p : out.patches) positives += p.label ? 1 : 0;
    out.naive_baseline = static_cast<double>(positives) / out.patches.size();
    if (positives > 0) {
        std::vector<std::pair<double, bool>> scored;
        scored.reserve(out.patches.size());
        for (const auto& p : out.patches) scored.emplace_back(p.score, p.label);
        out.ap = average_precision(std::move(scored));
    }
    return out;
}

// --- report + heatmap PNG --------------------------------------------------------

struct DetectionReport {
    Heatmap heatmap;
    ProtectedRegion region;
    PatchApResult patches;
    double max_raw_score = 0.0;
};

inline json detection_report_to_json(const DetectionReport& r) {
    json j;
    j["version"] = 1;
    if (r.patches.ap) j["ap"] = *r.patches.ap;
    j["naive_baseline"] = r.patches.naive_baseline;
    j["num_patches"] = r.patches.patches.size();
    int64_t pos = 0;
    for (const auto& p : r.patches.patches) pos += p.label ? 1 : 0;
    j["num_positive"] = pos;
    j["max_raw_score"] = r.max_raw_score;
    j["per_patch"] = json::array();
    for (const auto& p : r.patches.patches)
        j["per_patch"].push_back(
            {{"u", p.u0}, {"v", p.v0}, {"score", p.score}, {"label", p.label ? 1 : 0}});
    return j;
}

/// Viridis anchors; linear interpolation in between.
inline Vec3 viridis(double t) {
    static constexpr double anchors[9][3] = {
        {0.267004, 0.004874, 0.329415}, {0.282623, 0.140926, 0.457517},
        {0.253935, 0.265254, 0.529983}, {0.206756, 0.371758, 0.553117},
        {0.163625, 0.471133, 0.558148}, {0.127568, 0.566949, 0.550556},
        {0.134692, 0.658636, 0.517649}, {0.477504, 0.821444, 0.318195},
        {0.993248, 0.906157, 0.143936}};
    t = std::clamp(t, 0.0, 1.0) * 8.0;
    const int i = std::min(7, static_cast<int>(t));
    const double f = t - i;
    return {anchors[i][0] * (1 - f) + anchors[i + 1][0] * f,
            anchors[i][1] * (1 - f) + anchors[i + 1][1] * f,
            anchors[i][2] * (1 - f) + anchors[i + 1][2] * f};
}

inline Image<uint8_t> heatmap_to_rgb8(const ImageF& heatmap) {
    Image<uint8_t> img(heatmap.width, heatmap.height, 3);
    for (int y = 0; y < heatmap.height; ++y)
        for (int x = 0; x < heatmap.width; ++x) {
            const Vec3 c = viridis(heatmap.at(x, y));
            img.at(x, y, 0) = static_cast<uint8_t>(std::clamp(c.x, 0.0, 1.0) * 255.0 + 0.5);
            img.at(x, y, 1) = static_cast<uint8_t>(std::clamp(c.y, 0.0, 1.0) * 255.0 + 0.5);
            img.at(x, y, 2) = static_cast<uint8_t>(std::clamp(c.z, 0.0, 1.0) * 255.0 + 0.5);
        }
    return img;
}

}  // namespace totemkit

#endif
