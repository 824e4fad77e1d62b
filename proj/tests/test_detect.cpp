// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0
