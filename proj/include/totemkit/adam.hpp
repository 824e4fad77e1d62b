// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_ADAM_HPP
#define TOTEMKIT_ADAM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "totemkit/parallel.hpp"

namespace totemkit {

/// Bias-corrected Adam over a flat parameter array. Updates are per-parameter,
/// so the pass is deterministic under any thread partition.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int64_t t = 0;
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamState(size_t n = 0) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr,
              int n_threads = 1) {
        ++t;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        parallel_chunks(static_cast<int64_t>(params.size()), kReduceChunks, n_threads,
                        [&](int, int64_t lo, int64_t hi) {
                            for (int64_t i = lo; i < hi; ++i) {
                                const double g = grad[i];
                                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                                const double m_hat = m[i] / c1;
                                const double v_hat = v[i] / c2;
                                params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
                            }
                        });
    }
};

}  // namespace totemkit

#endif
