// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_CLI_HPP
#define TOTEMKIT_CLI_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "totemkit/bundle_io.hpp"
#include "totemkit/detect.hpp"
#include "totemkit/manifest.hpp"
#include "totemkit/posefit.hpp"
#include "totemkit/train.hpp"

namespace totemkit {

namespace detail {

inline void write_raw_f32(const std::string& path, const ImageF& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const double v : img.data) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), sizeof(float));
    }
}

inline double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double idx = p * (v.size() - 1);
    const size_t lo = static_cast<size_t>(idx);
    const size_t hi = std::min(v.size() - 1, lo + 1);
    const double f = idx - lo;
    return v[lo] * (1 - f) + v[hi] * f;
}

}  // namespace detail

/// render: scene.json -> bundle directory (image, masks, poses, manifest).
inline void cmd_render(const std::string& scene_path, const std::string& out_dir,
                       std::optional<uint64_t> seed_override = {}, int threads = 0) {
    WallClock clock;
    SceneSpec spec = scene_from_json(load_json_file(scene_path));
    if (seed_override) spec.seed = *seed_override;
    const RenderBundle bundle = render(spec, threads);
    write_bundle(out_dir, bundle);

    RunManifest m;
    m.command = "render";
    m.inputs["scene"] = scene_path;
    m.outputs["bundle"] = out_dir;
    m.seed = spec.seed;
    m.threads = threads;
    m.wall_clock_sec = clock.seconds();
    write_manifest(out_dir, m);
}

/// tamper: bundle + manip.json -> manipulated bundle (+ gt_mask.png).
inline void cmd_tamper(const std::string& bundle_dir, const std::string& manip_path,
                       const std::string& out_dir, std::optional<uint64_t> seed_override = {},
                       int threads = 0) {
    WallClock clock;
    const RenderBundle bundle = read_bundle(bundle_dir);
    const Manipulation manip = manipulation_from_json(load_json_file(manip_path));
    const uint64_t seed =
        seed_override ? *seed_override : hash_counter(bundle.spec.seed, 0x74616d70ULL);

    const ManipulationResult result = apply_manipulation(bundle, manip, seed, threads);

    RenderBundle tampered = bundle;
    tampered.image = result.image;
    write_bundle(out_dir, tampered);
    write_png_gray8(out_dir + "/gt_mask.png", result.gt_mask);
    json applied = result.applied;
    applied["seed"] = seed;
    save_json_file(out_dir + "/manip_applied.json", applied);

    RunManifest m;
    m.command = "tamper";
    m.inputs["bundle"] = bundle_dir;
    m.inputs["manip"] = manip_path;
    m.outputs["bundle"] = out_dir;
    m.config = applied;
    m.seed = seed;
    m.threads = threads;
    m.wall_clock_sec = clock.seconds();
    write_manifest(out_dir, m);
}

struct ReconstructOutputs {
    TrainResult result;
    TrainConfig cfg;
    std::vector<SphereTotem> totems_init;
};

/// reconstruct: bundle + train.json -> checkpoint, reconstruction.png,
/// history.csv, recon_metrics.json. Totem centers start from the mask fit
/// ("init") or the simulator ground truth ("oracle").
inline ReconstructOutputs cmd_reconstruct(const std::string& bundle_dir,
                                          const std::string& train_path, const std::string& out_dir,
                                          std::optional<uint64_t> seed_override = {},
                                          int threads = 0) {
    WallClock clock;
    const RenderBundle bundle = read_bundle(bundle_dir);
    const CubeMap default_cube = scene_cube_map(bundle.spec);
    TrainConfig cfg =
        train_config_from_json(load_json_file(train_path), default_cube, bundle.spec.room.depth);
    if (seed_override) cfg.seed = *seed_override;

    std::vector<SphereTotem> totems_init;
    for (size_t j = 0; j < bundle.spec.totems.size(); ++j) {
        SphereTotem t = bundle.spec.totems[j];
        if (cfg.pose_source == "oracle") {
            t.center = bundle.gt_poses.at(j);
        } else {
            t.center = init_totem_pose(bundle.spec.camera, bundle.totem_masks[j], t.radius);
        }
        totems_init.push_back(t);
    }

    const TrainResult result = train(bundle.spec.camera, totems_init, bundle.totem_masks,
                                     bundle.image, cfg, threads, &bundle.gt_poses);

    fs::create_directories(out_dir);
    save_checkpoint(out_dir + "/checkpoint.tck", result.field, cfg, totems_init,
                    result.totem_offsets, result.rng_state);
    const ImageRGB recon =
        render_camera_view(result.field, bundle.spec.camera, cfg.cube, cfg.sample_spec(), threads);
    write_png_rgb16(out_dir + "/reconstruction.png", recon);
    write_history_csv(out_dir + "/history.csv", result.history);

    // Reconstruction L1 against the camera view, excluding totem pixels (the
    // field is fit from the totems and cannot contain their appearance).
    auto outside_totems = [&](int x, int y) {
        for (const auto& tm : bundle.totem_masks)
            if (tm.mask.at(x, y)) return false;
        return true;
    };
    const double recon_l1 = mean_abs_diff_where(recon, bundle.image, outside_totems);

    double pose_init_err = 0.0, pose_final_err = 0.0;
    for (size_t j = 0; j < totems_init.size(); ++j) {
        pose_init_err += norm(totems_init[j].center - bundle.gt_poses[j]);
        pose_final_err += norm(result.totem_centers[j] - bundle.gt_poses[j]);
    }
    pose_init_err /= static_cast<double>(totems_init.size());
    pose_final_err /= static_cast<double>(totems_init.size());

    json metrics;
    metrics["version"] = 1;
    metrics["recon_l1"] = recon_l1;
    metrics["pose_l1_init"] = pose_init_err;
    metrics["pose_l1_final"] = pose_final_err;
    metrics["l_rec_final"] = result.history.back().l_rec;
    metrics["l_iou_final"] = result.history.back().l_iou;
    metrics["pose_source"] = cfg.pose_source;
    metrics["optimize_poses"] = cfg.optimize_poses;
    metrics["epochs"] = cfg.total_epochs;
    save_json_file(out_dir + "/recon_metrics.json", metrics);

    RunManifest m;
    m.command = "reconstruct";
    m.inputs["bundle"] = bundle_dir;
    m.inputs["train"] = train_path;
    m.outputs["checkpoint"] = out_dir + "/checkpoint.tck";
    m.outputs["reconstruction"] = out_dir + "/reconstruction.png";
    m.config = train_config_to_json(cfg);
    m.seed = cfg.seed;
    m.threads = threads;
    m.wall_clock_sec = clock.seconds();
    write_manifest(out_dir, m);

    return {result, cfg, totems_init};
}

/// detect: bundle (possibly tampered) + checkpoint -> heatmap PNG + raw float
/// sidecar, protected region, report.json.
inline DetectionReport cmd_detect(const std::string& bundle_dir, const std::string& checkpoint_path,
                                  const std::string& out_dir, int threads = 0) {
    WallClock clock;
    const RenderBundle bundle = read_bundle(bundle_dir);
    Checkpoint ck = load_checkpoint(checkpoint_path);
    if (ck.totems_init.size() != bundle.totem_masks.size())
        throw std::runtime_error("cmd_detect: checkpoint/bundle totem count mismatch");

    std::vector<SphereTotem> totems = ck.totems_init;
    for (size_t j = 0; j < totems.size(); ++j) totems[j].center += ck.totem_offsets.at(j);

    const SampleSpec sspec = ck.cfg.sample_spec();
    const std::vector<TrainRay> rays =
        preprocess_rays(bundle.spec.camera, totems, bundle.totem_masks, bundle.image, ck.cfg.cube,
                        ck.cfg.cube_overflow_threshold);

    DetectionReport report;
    report.region = protected_region(ck.field, rays, bundle.spec.camera, ck.cfg.cube, sspec, 30,
                                     0.10, threads);
    const ImageRGB recon =
        render_camera_view(ck.field, bundle.spec.camera, ck.cfg.cube, sspec, threads);
    report.heatmap = inconsistency_heatmap(bundle.image, recon, report.region.mask, 64);

    ImageGray gt_mask(bundle.image.width, bundle.image.height, 1, 0);
    bool tampered = false;
    if (fs::exists(bundle_dir + "/gt_mask.png")) {
        gt_mask = read_png_gray(bundle_dir + "/gt_mask.png");
        tampered = true;
    }
    const int band = totem_top_row(bundle.totem_masks);
    report.patches = patch_ap(report.heatmap.normalized, gt_mask, report.region.mask, band);
    for (const double v : report.heatmap.raw.data) report.max_raw_score = std::max(report.max_raw_score, v);

    fs::create_directories(out_dir);
    write_png_rgb8(out_dir + "/heatmap.png", heatmap_to_rgb8(report.heatmap.normalized));
    detail::write_raw_f32(out_dir + "/heatmap_raw.f32", report.heatmap.raw);
    write_png_gray8(out_dir + "/protected_region.png", report.region.mask);

    json rj = detection_report_to_json(report);
    rj["tampered"] = tampered;
    std::string kind = "none";
    if (fs::exists(bundle_dir + "/manip_applied.json"))
        kind = load_json_file(bundle_dir + "/manip_applied.json").value("kind", "none");
    rj["kind"] = kind;
    std::vector<double> region_scores;
    for (int y = 0; y < report.heatmap.raw.height; ++y)
        for (int x = 0; x < report.heatmap.raw.width; ++x)
            if (report.region.mask.at(x, y)) region_scores.push_back(report.heatmap.raw.at(x, y));
    rj["raw_p50"] = detail::percentile(region_scores, 0.50);
    rj["raw_p99"] = detail::percentile(region_scores, 0.99);
    save_json_file(out_dir + "/report.json", rj);

    RunManifest m;
    m.command = "detect";
    m.inputs["bundle"] = bundle_dir;
    m.inputs["checkpoint"] = checkpoint_path;
    m.outputs["report"] = out_dir + "/report.json";
    m.seed = ck.cfg.seed;
    m.threads = threads;
    m.wall_clock_sec = clock.seconds();
    write_manifest(out_dir, m);
    return report;
}

/// eval: aggregate detection reports and reconstruction metrics over run dirs
/// into runs.csv / summary.csv / eval.txt / eval.json.
inline json cmd_eval(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    WallClock clock;
    fs::create_directories(out_dir);

    struct KindAgg {
        int n = 0;
        double ap_sum = 0.0;
        double naive_sum = 0.0;
    };
    std::map<std::string, KindAgg> by_kind;
    double recon_l1_sum = 0.0, pose_init_sum = 0.0, pose_final_sum = 0.0;
    int recon_n = 0;

    std::ofstream runs(out_dir + "/runs.csv");
    if (!runs) throw std::runtime_error("cannot write " + out_dir + "/runs.csv");
    runs.precision(10);
    runs << "run,kind,ap,naive_baseline,recon_l1,pose_l1_init,pose_l1_final\n";

    for (const auto& dir : run_dirs) {
        std::string kind, ap_str, naive_str, l1_str, pi_str, pf_str;
        if (fs::exists(dir + "/report.json")) {
            const json r = load_json_file(dir + "/report.json");
            kind = r.value("kind", "none");
            if (r.contains("ap")) {
                const double ap = r["ap"].get<double>();
                auto& agg = by_kind[kind];
                ++agg.n;
                agg.ap_sum += ap;
                agg.naive_sum += r.value("naive_baseline", 0.0);
                std::ostringstream os;
                os.precision(10);
                os << ap;
                ap_str = os.str();
                std::ostringstream on;
                on.precision(10);
                on << r.value("naive_baseline", 0.0);
                naive_str = on.str();
            }
        }
        if (fs::exists(dir + "/recon_metrics.json")) {
            const json r = load_json_file(dir + "/recon_metrics.json");
            ++recon_n;
            recon_l1_sum += r.value("recon_l1", 0.0);
            pose_init_sum += r.value("pose_l1_init", 0.0);
            pose_final_sum += r.value("pose_l1_final", 0.0);
            auto fmt = [](double v) {
                std::ostringstream os;
                os.precision(10);
                os << v;
                return os.str();
            };
            l1_str = fmt(r.value("recon_l1", 0.0));
            pi_str = fmt(r.value("pose_l1_init", 0.0));
            pf_str = fmt(r.value("pose_l1_final", 0.0));
        }
        runs << dir << "," << kind << "," << ap_str << "," << naive_str << "," << l1_str << ","
             << pi_str << "," << pf_str << "\n";
    }
    runs.close();

    json summary;
    summary["version"] = 1;
    summary["by_kind"] = json::object();
    std::ofstream csv(out_dir + "/summary.csv");
    csv.precision(10);
    csv << "metric,kind,n,value\n";
    std::ostringstream txt;
    txt << "totemkit eval\n=============\n";
    for (const auto& [kind, agg] : by_kind) {
        const double mean_ap = agg.ap_sum / agg.n;
        const double mean_naive = agg.naive_sum / agg.n;
        summary["by_kind"][kind] = {{"n", agg.n}, {"mean_ap", mean_ap}, {"mean_naive", mean_naive}};
        csv << "mean_ap," << kind << "," << agg.n << "," << mean_ap << "\n";
        csv << "mean_naive," << kind << "," << agg.n << "," << mean_naive << "\n";
        txt << "  " << kind << ": n=" << agg.n << "  mean AP=" << mean_ap
            << "  naive=" << mean_naive << "\n";
    }
    if (recon_n > 0) {
        summary["reconstruction"] = {{"n", recon_n},
                                     {"mean_recon_l1", recon_l1_sum / recon_n},
                                     {"mean_pose_l1_init", pose_init_sum / recon_n},
                                     {"mean_pose_l1_final", pose_final_sum / recon_n}};
        csv << "mean_recon_l1,," << recon_n << "," << recon_l1_sum / recon_n << "\n";
        csv << "mean_pose_l1_init,," << recon_n << "," << pose_init_sum / recon_n << "\n";
        csv << "mean_pose_l1_final,," << recon_n << "," << pose_final_sum / recon_n << "\n";
        txt << "  reconstruction: n=" << recon_n << "  mean L1=" << recon_l1_sum / recon_n
            << "  pose L1 init=" << pose_init_sum / recon_n
            << "  final=" << pose_final_sum / recon_n << "\n";
    }
    csv.close();
    save_json_file(out_dir + "/eval.json", summary);
    std::ofstream text(out_dir + "/eval.txt");
    text << txt.str();
    text.close();
    std::cout << txt.str();

    RunManifest m;
    m.command = "eval";
    m.inputs["runs"] = run_dirs;
    m.outputs["summary"] = out_dir + "/eval.json";
    m.wall_clock_sec = clock.seconds();
    write_manifest(out_dir, m);
    return summary;
}

}  // namespace totemkit

#endif
