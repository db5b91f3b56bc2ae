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

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "revmatch/eval/benchmark.hpp"

namespace revmatch::eval {

struct ViewMetrics {
    std::size_t pairs = 0;
    std::optional<double> loss;  // empty when the view has no pairs
    std::optional<double> precision;
};

struct EvalReport {
    std::string scorer;
    std::size_t records = 0;
    ViewMetrics paper_centric;
    ViewMetrics reviewer_centric;
    ViewMetrics combined;
};

inline ViewMetrics metrics_for(const std::vector<PreferencePair>& pairs, const ScoreTable& scores) {
    ViewMetrics m;
    m.pairs = pairs.size();
    if (!pairs.empty()) {
        m.loss = ranking_loss(pairs, scores);
        m.precision = precision(pairs, scores);
    }
    return m;
}

/// Scores both views and their union.
inline EvalReport evaluate_benchmark(const std::vector<BenchmarkRecord>& records, const ScoreTable& scores,
                                     std::string scorer) {
    EvalReport r;
    r.scorer = std::move(scorer);
    r.records = records.size();
    const auto pc = derive_pairs(records, View::PaperCentric);
    const auto rc = derive_pairs(records, View::ReviewerCentric);
    auto all = pc;
    all.insert(all.end(), rc.begin(), rc.end());
    r.paper_centric = metrics_for(pc, scores);
    r.reviewer_centric = metrics_for(rc, scores);
    r.combined = metrics_for(all, scores);
    return r;
}

inline nlohmann::json to_json(const ViewMetrics& m) {
    nlohmann::json j = {{"pairs", m.pairs}, {"loss", nullptr}, {"precision", nullptr}};
    if (m.loss) j["loss"] = *m.loss;
    if (m.precision) j["precision"] = *m.precision;
    return j;
}

inline nlohmann::json to_json(const EvalReport& r) {
    return {{"scorer", r.scorer},
            {"records", r.records},
            {"paper_centric", to_json(r.paper_centric)},
            {"reviewer_centric", to_json(r.reviewer_centric)},
            {"combined", to_json(r.combined)}};
}

/// view<TAB>pairs<TAB>loss<TAB>precision, one row per view plus "combined".
inline std::string to_tsv(const EvalReport& r) {
    std::string out = "view\tpairs\tloss\tprecision\n";
    auto row = [&](const char* name, const ViewMetrics& m) {
        char buf[160];
        auto num = [](const std::optional<double>& v) {
            if (!v) return std::string("NA");
            char b[40];
            std::snprintf(b, sizeof(b), "%.6f", *v);
            return std::string(b);
        };
        std::snprintf(buf, sizeof(buf), "%s\t%zu\t%s\t%s\n", name, m.pairs, num(m.loss).c_str(),
                      num(m.precision).c_str());
        out += buf;
    };
    row("paper_centric", r.paper_centric);
    row("reviewer_centric", r.reviewer_centric);
    row("combined", r.combined);
    return out;
}

inline std::string to_tsv(const BenchmarkStats& s) {
    std::string out = "panel\tbucket\tcount\tpercent\n";
    auto panel = [&](const char* name, const Histogram& h) {
        for (const auto& [bucket, count] : h.counts) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%s\t%d\t%zu\t%.2f\n", name, bucket, count, h.percent(bucket));
            out += buf;
        }
    };
    panel("papers_per_annotator", s.papers_per_annotator);
    panel("annotators_per_paper", s.annotators_per_paper);
    panel("rating", s.ratings);
    return out;
}

}  // namespace revmatch::eval
