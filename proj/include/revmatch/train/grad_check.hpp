// Copyright 2026 The revmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "revmatch/error.hpp"
#include "revmatch/random.hpp"
#include "revmatch/train/adapter.hpp"
#include "revmatch/train/loss.hpp"

namespace revmatch::train {

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::size_t coordinates = 0;
    double max_abs_analytic = 0.0;
    double max_abs_numeric = 0.0;
};

/// Central finite differences on randomly chosen coordinates of A and B
/// (half from each) against batch_objective's analytic gradient. Each
/// coordinate's error is |g_fd - g_an| / max(1e-12, |g_fd| + |g_an|).
inline GradCheckReport grad_check(const AdapterModel& model, std::span<const KeyedTriplet> batch,
                                  const EmbeddingTable& table, double epsilon, std::size_t coordinates = 24,
                                  std::uint64_t seed = 1) {
    if (!(epsilon >= 1e-6 && epsilon <= 1e-3)) throw UsageError("grad_check epsilon must lie in [1e-6, 1e-3]");
    coordinates = std::max<std::size_t>(coordinates, 20);
    const auto analytic = batch_objective(model, batch, table, true);
    AdapterModel probe = model;
    Rng rng(seed);
    GradCheckReport report;
    report.coordinates = coordinates;
    for (std::size_t k = 0; k < coordinates; ++k) {
        const bool in_a = k % 2 == 0;
        Matrix& param = in_a ? probe.a : probe.b;
        const Matrix& grad = in_a ? analytic.grad_a : analytic.grad_b;
        const auto i = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(param.rows())));
        const auto j = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(param.cols())));
        const double saved = param(i, j);
        param(i, j) = saved + epsilon;
        const double up = total_loss(probe, batch, table);
        param(i, j) = saved - epsilon;
        const double down = total_loss(probe, batch, table);
        param(i, j) = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double exact = grad(i, j);
        const double rel = std::abs(numeric - exact) / std::max(1e-12, std::abs(numeric) + std::abs(exact));
        report.max_relative_error = std::max(report.max_relative_error, rel);
        report.max_abs_analytic = std::max(report.max_abs_analytic, std::abs(exact));
        report.max_abs_numeric = std::max(report.max_abs_numeric, std::abs(numeric));
    }
    return report;
}

}  // namespace revmatch::train
