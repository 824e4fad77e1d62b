// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_MANIFEST_HPP
#define TOTEMKIT_MANIFEST_HPP

#include <chrono>
#include <string>

#include "totemkit/json_util.hpp"
#include "totemkit/version.hpp"

namespace totemkit {

/// One manifest per output directory; re-running a command with the inputs and
/// seed recorded here reproduces the metrics files byte-identically (only the
/// wall clock differs).
struct RunManifest {
    std::string command;
    json inputs = json::object();
    json outputs = json::object();
    json config = json::object();
    uint64_t seed = 0;
    int threads = 0;
    double wall_clock_sec = 0.0;
};

inline void write_manifest(const std::string& dir, const RunManifest& m) {
    json j;
    j["version"] = 1;
    j["tool_version"] = kToolVersion;
    j["command"] = m.command;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["wall_clock_sec"] = m.wall_clock_sec;
    save_json_file(dir + "/manifest.json", j);
}

class WallClock {
  public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace totemkit

#endif
