// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_TRAIN_HPP
#define TOTEMKIT_TRAIN_HPP

#include <cstring>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "totemkit/adam.hpp"
#include "totemkit/field.hpp"
#include "totemkit/json_util.hpp"
#include "totemkit/parallel.hpp"
#include "totemkit/posefit.hpp"
#include "totemkit/preprocess.hpp"
#include "totemkit/rng.hpp"
#include "totemkit/volume.hpp"

namespace totemkit {

struct TrainConfig {
    uint64_t seed = 1;
    int grid_resolution = 64;
    double lambda = 10.0;     // L = lambda * L_rec + iou_weight * L_IoU
    double iou_weight = 1.0;  // 0 turns the IoU regularizer off (ablation)
    int samples_per_ray = 64;
    double near = 0.0;
    double far = 6.0;
    int warmup_epochs = 100;
    int total_epochs = 3000;
    double lr_field = 5e-2;
    double lr_totem = 1e-5;
    double lr_decay_gamma = 0.99;
    int lr_decay_every = 100;
    int batch_size = 4096;
    double cube_overflow_threshold = 0.15;
    CubeMap cube;
    std::string pose_source = "init";  // "init" | "oracle"
    bool optimize_poses = true;
    double fd_step = 1e-4;
    int fd_rays_per_totem = 256;

    SampleSpec sample_spec() const { return {near, far, samples_per_ray}; }

    void validate() const {
        if (grid_resolution < 2 || samples_per_ray < 2 || batch_size < 1 || total_epochs < 1 ||
            warmup_epochs < 0 || lr_field <= 0 || lr_totem <= 0 || lr_decay_gamma <= 0 ||
            lr_decay_every < 1 || lambda < 0 || iou_weight < 0 || fd_step <= 0 ||
            fd_rays_per_totem < 1 || cube_overflow_threshold < 0)
            throw std::invalid_argument("train config: field out of range");
        if (!(near < far)) throw std::invalid_argument("train config: need near < far");
        if (pose_source != "init" && pose_source != "oracle")
            throw std::invalid_argument("train config: pose_source must be 'init' or 'oracle'");
    }
};

inline json train_config_to_json(const TrainConfig& c) {
    json j;
    j["version"] = 1;
    j["seed"] = c.seed;
    j["grid_resolution"] = c.grid_resolution;
    j["lambda"] = c.lambda;
    j["iou_weight"] = c.iou_weight;
    j["samples_per_ray"] = c.samples_per_ray;
    j["near"] = c.near;
    j["far"] = c.far;
    j["warmup_epochs"] = c.warmup_epochs;
    j["total_epochs"] = c.total_epochs;
    j["lr_field"] = c.lr_field;
    j["lr_totem"] = c.lr_totem;
    j["lr_decay_gamma"] = c.lr_decay_gamma;
    j["lr_decay_every"] = c.lr_decay_every;
    j["batch_size"] = c.batch_size;
    j["cube_overflow_threshold"] = c.cube_overflow_threshold;
    j["scene_bounds"] = {{"min", vec3_to_json(c.cube.bmin)}, {"max", vec3_to_json(c.cube.bmax)}};
    j["pose_source"] = c.pose_source;
    j["optimize_poses"] = c.optimize_poses;
    j["fd_step"] = c.fd_step;
    j["fd_rays_per_totem"] = c.fd_rays_per_totem;
    return j;
}

/// Parse a training config. near/far/scene_bounds are optional and fall back
/// to the provided scene-derived defaults.
inline TrainConfig train_config_from_json(const json& j, const CubeMap& default_cube,
                                          double default_far) {
    check_version(j, "train config");
    check_fields(j, "train config", {"version"},
                 {"seed", "grid_resolution", "lambda", "iou_weight", "samples_per_ray", "near", "far",
                  "warmup_epochs", "total_epochs", "lr_field", "lr_totem", "lr_decay_gamma",
                  "lr_decay_every", "batch_size", "cube_overflow_threshold", "scene_bounds",
                  "pose_source", "optimize_poses", "fd_step", "fd_rays_per_totem"});
    TrainConfig c;
    c.cube = default_cube;
    c.far = default_far;
    c.seed = j.value("seed", c.seed);
    c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
    c.lambda = j.value("lambda", c.lambda);
    c.iou_weight = j.value("iou_weight", c.iou_weight);
    c.samples_per_ray = j.value("samples_per_ray", c.samples_per_ray);
    c.near = j.value("near", c.near);
    c.far = j.value("far", c.far);
    c.warmup_epochs = j.value("warmup_epochs", c.warmup_epochs);
    c.total_epochs = j.value("total_epochs", c.total_epochs);
    c.lr_field = j.value("lr_field", c.lr_field);
    c.lr_totem = j.value("lr_totem", c.lr_totem);
    c.lr_decay_gamma = j.value("lr_decay_gamma", c.lr_decay_gamma);
    c.lr_decay_every = j.value("lr_decay_every", c.lr_decay_every);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.cube_overflow_threshold = j.value("cube_overflow_threshold", c.cube_overflow_threshold);
    if (j.contains("scene_bounds")) {
        const json& jb = j["scene_bounds"];
        check_fields(jb, "train config.scene_bounds", {"min", "max"});
        c.cube.bmin = vec3_from_json(jb["min"], "train config.scene_bounds.min");
        c.cube.bmax = vec3_from_json(jb["max"], "train config.scene_bounds.max");
    }
    c.pose_source = j.value("pose_source", c.pose_source);
    c.optimize_poses = j.value("optimize_poses", c.optimize_poses);
    c.fd_step = j.value("fd_step", c.fd_step);
    c.fd_rays_per_totem = j.value("fd_rays_per_totem", c.fd_rays_per_totem);
    c.validate();
    return c;
}

struct EpochStats {
    int epoch = 0;
    double l_rec = 0.0;  // per-ray mean photometric loss over the epoch
    double l_iou = 0.0;  // summed over totems at epoch end
    std::optional<double> pose_error;
};

struct TrainResult {
    RadianceField field{2};
    std::vector<Vec3> totem_centers;
    std::vector<Vec3> totem_offsets;
    std::vector<EpochStats> history;
    std::string rng_state;
};

inline void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "epoch,l_rec,l_iou,pose_error\n";
    out.precision(17);
    for (const auto& h : history) {
        out << h.epoch << "," << h.l_rec << "," << h.l_iou << ",";
        if (h.pose_error) out << *h.pose_error;
        out << "\n";
    }
}

namespace detail {

/// Per-chunk gradient accumulator: dense buffer + touched-vertex bookkeeping so
/// that zeroing and merging cost is proportional to the batch footprint, and
/// the merge order (chunk-major, discovery order within a chunk) is fixed.
struct GradChunk {
    std::vector<double> buffer;        // param-sized
    std::vector<int64_t> touched;      // vertex ids
    std::vector<int64_t> stamp;        // vertex -> last step seen
    double loss = 0.0;

    void init(int64_t vertex_count) {
        buffer.assign(vertex_count * RadianceField::kChannels, 0.0);
        stamp.assign(vertex_count, -1);
        touched.clear();
    }
};

inline int64_t pinned_uniform(std::mt19937_64& rng, int64_t bound) {
    // Rejection sampling; pinned here so shuffles do not depend on the
    // standard library's distribution implementation.
    const uint64_t span = static_cast<uint64_t>(bound);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<int64_t>(r % span);
}

inline void pinned_shuffle(std::vector<int64_t>& v, std::mt19937_64& rng) {
    for (int64_t i = static_cast<int64_t>(v.size()) - 1; i > 0; --i) {
        const int64_t k = pinned_uniform(rng, i + 1);
        std::swap(v[i], v[k]);
    }
}

}  // namespace detail

/// Fit the radiance field from totem-pixel rays, optionally jointly optimizing
/// per-totem translation offsets under lambda * L_rec + L_IoU. `totems_init`
/// carries the initial centers (mask-estimated or oracle); gt_poses, when
/// given, only feeds the history's pose-error column.
inline TrainResult train(const PinholeCamera& cam, const std::vector<SphereTotem>& totems_init,
                         const std::vector<TotemMask>& masks, const ImageRGB& image,
                         const TrainConfig& cfg, int n_threads = 0,
                         const std::vector<Vec3>* gt_poses = nullptr,
                         const std::function<void(const EpochStats&, const RadianceField&)>& on_epoch = {}) {
    cfg.validate();
    if (totems_init.empty() || totems_init.size() != masks.size())
        throw std::invalid_argument("train: totem/mask mismatch");
    const int n_totems = static_cast<int>(totems_init.size());
    const SampleSpec sspec = cfg.sample_spec();

    TrainResult result;
    result.field = RadianceField(cfg.grid_resolution);
    RadianceField& field = result.field;
    result.totem_offsets.assign(n_totems, Vec3{0, 0, 0});

    AdamState adam_field(field.param_count());
    AdamState adam_pose(static_cast<size_t>(n_totems) * 3);
    std::vector<double> pose_params(static_cast<size_t>(n_totems) * 3, 0.0);
    std::vector<double> grad_total(field.param_count(), 0.0);

    constexpr int kGradChunks = 8;
    std::vector<detail::GradChunk> chunks(kGradChunks);
    for (auto& c : chunks) c.init(field.vertex_count());

    std::vector<BBox> mask_boxes;
    mask_boxes.reserve(n_totems);
    for (const auto& m : masks) mask_boxes.push_back(mask_bbox(m));

    std::mt19937_64 rng(cfg.seed);
    int64_t global_step = 0;

    auto current_totems = [&]() {
        std::vector<SphereTotem> ts = totems_init;
        for (int j = 0; j < n_totems; ++j) ts[j].center += result.totem_offsets[j];
        return ts;
    };

    auto derive_ray = [&](const SphereTotem& totem, int px, int py) -> std::optional<std::pair<Vec3, Vec3>> {
        const auto exit = totem_pixel_to_scene_ray(cam, totem, px + 0.5, py + 0.5);
        if (!exit) return std::nullopt;
        const auto norm_ray = normalize_exit_ray(exit->origin, exit->direction);
        if (!norm_ray) return std::nullopt;
        const Vec3 c = cfg.cube.to_cube(norm_ray->first);
        const double limit = 1.0 + cfg.cube_overflow_threshold;
        if (std::abs(c.x) > limit || std::abs(c.y) > limit || std::abs(c.z) > limit)
            return std::nullopt;
        return norm_ray;
    };

    // IoU loss over all totems at the current offsets.
    auto current_iou_loss = [&]() {
        double sum = 0.0;
        const auto ts = current_totems();
        for (int j = 0; j < n_totems; ++j)
            sum += iou_loss(predicted_bbox(cam, ts[j].center, ts[j].radius), mask_boxes[j]);
        return sum;
    };

    std::vector<TrainRay> rays;
    std::vector<int64_t> perm;
    std::vector<uint8_t> alive;

    const int64_t epoch_hash_salt = 0x746f74656dULL;  // decorrelates jitter across epochs

    for (int epoch = 1; epoch <= cfg.total_epochs; ++epoch) {
        const bool joint = cfg.optimize_poses && epoch > cfg.warmup_epochs;

        // Membership refresh at the current pose.
        rays = preprocess_rays(cam, current_totems(), masks, image, cfg.cube,
                               cfg.cube_overflow_threshold);
        const int64_t n_rays = static_cast<int64_t>(rays.size());
        alive.assign(rays.size(), 1);
        perm.resize(n_rays);
        for (int64_t i = 0; i < n_rays; ++i) perm[i] = i;
        detail::pinned_shuffle(perm, rng);

        double epoch_sq_err = 0.0;
        int64_t epoch_rays = 0;
        bool pose_dirty = false;

        for (int64_t batch_start = 0; batch_start < n_rays; batch_start += cfg.batch_size) {
            const int64_t batch_end = std::min(n_rays, batch_start + cfg.batch_size);
            const int64_t batch_n = batch_end - batch_start;
            ++global_step;

            // Re-derive batch geometry whenever the pose moved mid-epoch.
            if (pose_dirty) {
                const auto ts = current_totems();
                parallel_chunks(batch_n, kGradChunks, n_threads, [&](int, int64_t lo, int64_t hi) {
                    for (int64_t b = lo; b < hi; ++b) {
                        const int64_t ri = perm[batch_start + b];
                        TrainRay& r = rays[ri];
                        const auto g = derive_ray(ts[r.totem_id], r.px, r.py);
                        if (!g) {
                            alive[ri] = 0;
                            continue;
                        }
                        alive[ri] = 1;
                        r.origin = g->first;
                        r.direction = g->second;
                    }
                });
            }

            // Forward + backward into per-chunk buffers.
            for (auto& chunk : chunks) chunk.loss = 0.0;
            parallel_chunks(batch_n, kGradChunks, n_threads, [&](int ci, int64_t lo, int64_t hi) {
                detail::GradChunk& chunk = chunks[ci];
                VolumeWorkspace ws;
                for (int64_t b = lo; b < hi; ++b) {
                    const int64_t ri = perm[batch_start + b];
                    if (!alive[ri]) continue;
                    const TrainRay& r = rays[ri];
                    const uint64_t ray_uid =
                        (static_cast<uint64_t>(r.totem_id) << 40) ^
                        (static_cast<uint64_t>(r.py) << 20) ^ static_cast<uint64_t>(r.px);
                    const Vec3 color = volume_render_ws(
                        field, cfg.cube, r.origin, r.direction, sspec,
                        [&](int i) {
                            return hash_unit(cfg.seed ^ epoch_hash_salt, static_cast<uint64_t>(epoch),
                                             ray_uid, static_cast<uint64_t>(i));
                        },
                        ws);
                    const Vec3 diff = color - r.target;
                    chunk.loss += norm_sq(diff);
                    Vec3 dL_dC = diff * 2.0;
                    if (joint) dL_dC *= cfg.lambda;

                    // Scatter with touch bookkeeping so buffers stay mostly clean.
                    for (auto& st : ws.states) {
                        if (!st.fp.inside) continue;
                        for (int k = 0; k < 8; ++k) {
                            const int64_t vtx = st.fp.idx[k];
                            if (chunk.stamp[vtx] != global_step) {
                                chunk.stamp[vtx] = global_step;
                                chunk.touched.push_back(vtx);
                                double* gb = &chunk.buffer[vtx * RadianceField::kChannels];
                                gb[0] = gb[1] = gb[2] = gb[3] = 0.0;
                            }
                        }
                    }
                    volume_scatter_gradient(field, ws, dL_dC, chunk.buffer.data());
                }
            });

            double batch_sq_err = 0.0;
            for (const auto& chunk : chunks) batch_sq_err += chunk.loss;
            if (!std::isfinite(batch_sq_err))
                throw std::runtime_error("train: loss diverged (not finite) at epoch " +
                                         std::to_string(epoch));
            epoch_sq_err += batch_sq_err;
            epoch_rays += batch_n;

            // Merge chunk gradients (chunk-major order, deterministic), then zero.
            for (auto& chunk : chunks) {
                for (const int64_t vtx : chunk.touched) {
                    double* dst = &grad_total[vtx * RadianceField::kChannels];
                    double* src = &chunk.buffer[vtx * RadianceField::kChannels];
                    dst[0] += src[0];
                    dst[1] += src[1];
                    dst[2] += src[2];
                    dst[3] += src[3];
                }
            }

            adam_field.step(field.params(), grad_total, cfg.lr_field, n_threads);
            field.refresh_activations(n_threads);

            // Clear the merged entries for the next step.
            for (auto& chunk : chunks) {
                for (const int64_t vtx : chunk.touched) {
                    double* dst = &grad_total[vtx * RadianceField::kChannels];
                    dst[0] = dst[1] = dst[2] = dst[3] = 0.0;
                }
                chunk.touched.clear();
            }

            if (joint) {
                // Finite-difference pose gradient on a fixed subsample of the
                // batch, at evaluation-mode sampling.
                std::vector<double> grad_pose(static_cast<size_t>(n_totems) * 3, 0.0);
                for (int j = 0; j < n_totems; ++j) {
                    std::vector<int64_t> sel;
                    int64_t totem_batch_count = 0;
                    for (int64_t b = batch_start; b < batch_end; ++b) {
                        const int64_t ri = perm[b];
                        if (!alive[ri] || rays[ri].totem_id != j) continue;
                        ++totem_batch_count;
                        if (static_cast<int>(sel.size()) < cfg.fd_rays_per_totem) sel.push_back(ri);
                    }
                    if (sel.empty()) continue;
                    const double scale =
                        static_cast<double>(totem_batch_count) / static_cast<double>(sel.size());

                    for (int axis = 0; axis < 3; ++axis) {
                        SphereTotem plus = totems_init[j];
                        plus.center += result.totem_offsets[j];
                        SphereTotem minus = plus;
                        plus.center[axis] += cfg.fd_step;
                        minus.center[axis] -= cfg.fd_step;

                        double loss_plus = 0.0, loss_minus = 0.0;
                        std::vector<double> partial_plus(kGradChunks, 0.0), partial_minus(kGradChunks, 0.0);
                        parallel_chunks(
                            static_cast<int64_t>(sel.size()), kGradChunks, n_threads,
                            [&](int ci, int64_t lo, int64_t hi) {
                                VolumeWorkspace ws;
                                for (int64_t s = lo; s < hi; ++s) {
                                    const TrainRay& r = rays[sel[s]];
                                    const auto gp = derive_ray(plus, r.px, r.py);
                                    const auto gm = derive_ray(minus, r.px, r.py);
                                    if (!gp || !gm) continue;  // common support only
                                    const Vec3 cp = volume_render_ws(
                                        field, cfg.cube, gp->first, gp->second, sspec,
                                        [](int) { return 0.5; }, ws);
                                    partial_plus[ci] += norm_sq(cp - r.target);
                                    const Vec3 cm = volume_render_ws(
                                        field, cfg.cube, gm->first, gm->second, sspec,
                                        [](int) { return 0.5; }, ws);
                                    partial_minus[ci] += norm_sq(cm - r.target);
                                }
                            });
                        for (int ci = 0; ci < kGradChunks; ++ci) {
                            loss_plus += partial_plus[ci];
                            loss_minus += partial_minus[ci];
                        }
                        const double grad_rec = (loss_plus - loss_minus) / (2.0 * cfg.fd_step) * scale;

                        double grad_iou = 0.0;
                        if (cfg.iou_weight > 0.0) {
                            const double iou_p =
                                iou_loss(predicted_bbox(cam, plus.center, plus.radius), mask_boxes[j]);
                            const double iou_m =
                                iou_loss(predicted_bbox(cam, minus.center, minus.radius), mask_boxes[j]);
                            grad_iou = (iou_p - iou_m) / (2.0 * cfg.fd_step);
                        }
                        grad_pose[static_cast<size_t>(j) * 3 + axis] =
                            cfg.lambda * grad_rec + cfg.iou_weight * grad_iou;
                    }
                }

                const int decay_steps = (epoch - 1) / cfg.lr_decay_every;
                const double lr = cfg.lr_totem * std::pow(cfg.lr_decay_gamma, decay_steps);
                adam_pose.step(pose_params, grad_pose, lr, 1);
                for (int j = 0; j < n_totems; ++j)
                    result.totem_offsets[j] = {pose_params[j * 3 + 0], pose_params[j * 3 + 1],
                                               pose_params[j * 3 + 2]};
                pose_dirty = true;
            }
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.l_rec = epoch_rays > 0 ? epoch_sq_err / static_cast<double>(epoch_rays) : 0.0;
        stats.l_iou = current_iou_loss();
        if (gt_poses && gt_poses->size() == static_cast<size_t>(n_totems)) {
            double err = 0.0;
            const auto ts = current_totems();
            for (int j = 0; j < n_totems; ++j) err += norm(ts[j].center - (*gt_poses)[j]);
            stats.pose_error = err / n_totems;
        }
        result.history.push_back(stats);
        if (on_epoch) on_epoch(stats, field);
    }

    result.totem_centers.clear();
    for (const auto& t : current_totems()) result.totem_centers.push_back(t.center);
    std::ostringstream oss;
    oss << rng;
    result.rng_state = oss.str();
    return result;
}

/// Render the fitted field from the capture camera: pixel rays are already
/// z=0-origin, unit-z-direction, so they share the training parameterization.
inline ImageRGB render_camera_view(const RadianceField& field, const PinholeCamera& cam,
                                   const CubeMap& cube, const SampleSpec& sspec, int n_threads = 0) {
    ImageRGB img(cam.width, cam.height, 3);
    parallel_for(cam.height, n_threads, [&](int64_t y) {
        for (int x = 0; x < cam.width; ++x) {
            const Vec3 dir{(x + 0.5 - cam.cx) / cam.fx, (y + 0.5 - cam.cy) / cam.fy, 1.0};
            const Vec3 c = volume_render(field, cube, Vec3{0, 0, 0}, dir, sspec);
            img.at(x, static_cast<int>(y), 0) = std::clamp(c.x, 0.0, 1.0);
            img.at(x, static_cast<int>(y), 1) = std::clamp(c.y, 0.0, 1.0);
            img.at(x, static_cast<int>(y), 2) = std::clamp(c.z, 0.0, 1.0);
        }
    });
    return img;
}

// --- checkpoint io -----------------------------------------------------------

struct Checkpoint {
    TrainConfig cfg;
    RadianceField field{2};
    std::vector<SphereTotem> totems_init;
    std::vector<Vec3> totem_offsets;
    std::string rng_state;
};

inline void save_checkpoint(const std::string& path, const RadianceField& field,
                            const TrainConfig& cfg, const std::vector<SphereTotem>& totems_init,
                            const std::vector<Vec3>& offsets, const std::string& rng_state) {
    json header;
    header["version"] = 1;
    header["config"] = train_config_to_json(cfg);
    header["rng_state"] = rng_state;
    header["totems_init"] = json::array();
    for (const auto& t : totems_init)
        header["totems_init"].push_back(
            {{"center", vec3_to_json(t.center)}, {"radius", t.radius}, {"ior", t.ior}});
    header["totem_offsets"] = json::array();
    for (const auto& o : offsets) header["totem_offsets"].push_back(vec3_to_json(o));
    const std::string hs = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write("TOTEMCK1", 8);
    const uint64_t hlen = hs.size();
    out.write(reinterpret_cast<const char*>(&hlen), 8);
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    const auto& params = field.params();
    out.write(reinterpret_cast<const char*>(params.data()),
              static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "TOTEMCK1", 8) != 0)
        throw std::runtime_error(path + ": not a totemkit checkpoint");
    uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 8);
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error(path + ": truncated header");
    const json header = json::parse(hs);
    check_version(header, "checkpoint");

    Checkpoint ck;
    ck.cfg = train_config_from_json(header["config"], CubeMap{}, 6.0);
    ck.rng_state = header.value("rng_state", "");
    for (const auto& jt : header["totems_init"])
        ck.totems_init.push_back(SphereTotem(vec3_from_json(jt["center"], "checkpoint totem"),
                                             jt["radius"].get<double>(), jt["ior"].get<double>()));
    for (const auto& jo : header["totem_offsets"])
        ck.totem_offsets.push_back(vec3_from_json(jo, "checkpoint offset"));

    ck.field = RadianceField(ck.cfg.grid_resolution);
    auto& params = ck.field.params();
    in.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(params.size() * sizeof(double)))
        throw std::runtime_error(path + ": truncated parameter block");
    ck.field.refresh_activations(1);
    return ck;
}

}  // namespace totemkit

#endif
