// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_VERSION_HPP
#define TOTEMKIT_VERSION_HPP

namespace totemkit {

inline constexpr const char* kToolVersion = "0.1.0";

}

#endif
