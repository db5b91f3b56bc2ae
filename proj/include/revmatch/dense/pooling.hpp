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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revmatch/corpus/types.hpp"
#include "revmatch/dense/store.hpp"
#include "revmatch/error.hpp"

namespace revmatch::dense {

enum class Pooling { Mean, P75, Max };

inline std::string_view to_string(Pooling p) {
    switch (p) {
        case Pooling::Mean: return "mean";
        case Pooling::P75: return "p75";
        case Pooling::Max: return "max";
    }
    return "mean";
}

inline std::optional<Pooling> parse_pooling(std::string_view s) {
    if (s == "mean") return Pooling::Mean;
    if (s == "p75") return Pooling::P75;
    if (s == "max") return Pooling::Max;
    return std::nullopt;
}

/// Linear-interpolation percentile over the ascending sort, at rank q * (n - 1).
inline double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty list");
    std::sort(values.begin(), values.end());
    const double rank = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

/// Aggregates per-publication similarities into one reviewer score.
inline double pool_scores(const std::vector<double>& sims, Pooling strategy) {
    if (sims.empty()) throw DataError("cannot pool an empty similarity list");
    for (double s : sims) {
        if (!std::isfinite(s)) throw DataError("non-finite similarity in pooling input");
    }
    switch (strategy) {
        case Pooling::Mean: {
            double total = 0.0;
            for (double s : sims) total += s;
            return total / static_cast<double>(sims.size());
        }
        case Pooling::P75: return percentile(sims, 0.75);
        case Pooling::Max: return *std::max_element(sims.begin(), sims.end());
    }
    return 0.0;
}

/// Pooled cosine between a stored query paper and the stored vectors of a
/// reviewer's publications. Publications without a vector are skipped; none
/// at all is a ColdStartError.
template <typename PaperIds>
double baseline_reviewer_score(const EmbeddingStore& papers, const std::string& query_id, const std::string& reviewer_id,
                               const PaperIds& publication_ids, Pooling strategy) {
    const auto q = papers.vector(query_id);
    std::vector<double> sims;
    for (const auto& pid : publication_ids) {
        if (!papers.contains(pid)) continue;
        sims.push_back(dot(q, papers.vector(pid)));
    }
    if (sims.empty()) throw ColdStartError(reviewer_id, "no embedded publications");
    return pool_scores(sims, strategy);
}

inline double baseline_reviewer_score(const EmbeddingStore& papers, const std::string& query_id,
                                      const corpus::Author& reviewer, Pooling strategy) {
    return baseline_reviewer_score(papers, query_id, reviewer.author_id, reviewer.paper_ids, strategy);
}

}  // namespace revmatch::dense
