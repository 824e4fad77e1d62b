// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_JSON_UTIL_HPP
#define TOTEMKIT_JSON_UTIL_HPP

#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace totemkit {

using nlohmann::json;

/// Configs are versioned and closed: unknown fields are rejected so that a
/// typo'd key fails loudly instead of silently falling back to a default.
inline void check_fields(const json& j, const std::string& where,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        if (!j.contains(k)) throw std::invalid_argument(where + ": missing field '" + k + "'");
        allowed.insert(k);
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw std::invalid_argument(where + ": unknown field '" + item.key() + "'");
    }
}

inline void check_version(const json& j, const std::string& where, int expected = 1) {
    if (j.value("version", -1) != expected)
        throw std::invalid_argument(where + ": unsupported or missing version (expected " +
                                    std::to_string(expected) + ")");
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace totemkit

#endif
