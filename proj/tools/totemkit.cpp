// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "totemkit/cli.hpp"
#include "totemkit/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"totemkit: render, tamper, reconstruct, detect, eval"};
    app.set_version_flag("--version", totemkit::kToolVersion);
    app.require_subcommand(1);

    long long seed = -1;
    int threads = 0;
    std::string out;
    app.add_option("--seed", seed, "Override the config seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = hardware)")->capture_default_str();

    std::string scene_path, bundle_dir, manip_path, train_path, checkpoint_path;
    std::vector<std::string> run_dirs;

    CLI::App* render = app.add_subcommand("render", "Render a scene.json into a bundle directory");
    render->add_option("--scene", scene_path, "Scene spec JSON")->required();
    render->add_option("--out", out, "Output bundle directory")->required();

    CLI::App* tamper = app.add_subcommand("tamper", "Apply a manipulation to a rendered bundle");
    tamper->add_option("--bundle", bundle_dir, "Input bundle directory")->required();
    tamper->add_option("--manip", manip_path, "Manipulation JSON")->required();
    tamper->add_option("--out", out, "Output bundle directory")->required();

    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "Fit the radiance field from totem pixels");
    reconstruct->add_option("--bundle", bundle_dir, "Input bundle directory")->required();
    reconstruct->add_option("--train", train_path, "Training config JSON")->required();
    reconstruct->add_option("--out", out, "Output run directory")->required();

    CLI::App* detect = app.add_subcommand("detect", "Score a bundle against a checkpoint");
    detect->add_option("--bundle", bundle_dir, "Bundle directory to verify")->required();
    detect->add_option("--checkpoint", checkpoint_path, "Checkpoint from reconstruct")->required();
    detect->add_option("--out", out, "Output report directory")->required();

    CLI::App* eval = app.add_subcommand("eval", "Aggregate run directories into a table");
    eval->add_option("--runs", run_dirs, "Run directories (reports and/or reconstructions)")
        ->required()
        ->expected(-1);
    eval->add_option("--out", out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    std::optional<uint64_t> seed_override;
    if (seed >= 0) seed_override = static_cast<uint64_t>(seed);

    try {
        if (render->parsed()) {
            totemkit::cmd_render(scene_path, out, seed_override, threads);
        } else if (tamper->parsed()) {
            totemkit::cmd_tamper(bundle_dir, manip_path, out, seed_override, threads);
        } else if (reconstruct->parsed()) {
            totemkit::cmd_reconstruct(bundle_dir, train_path, out, seed_override, threads);
        } else if (detect->parsed()) {
            totemkit::cmd_detect(bundle_dir, checkpoint_path, out, threads);
        } else if (eval->parsed()) {
            totemkit::cmd_eval(run_dirs, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
