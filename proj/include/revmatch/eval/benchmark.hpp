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
#include <cstdlib>
#include <optional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "revmatch/error.hpp"
#include "revmatch/prefgen/triplets.hpp"

namespace revmatch::eval {

using prefgen::View;

/// One self-assessed expertise rating.
struct BenchmarkRecord {
    std::string paper_id;
    std::string reviewer_id;
    int rating = 0;

    friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

/// Anchor prefers `preferred` over `other`; weight is the rating gap (>= 1).
struct PreferencePair {
    std::string anchor_id;
    std::string preferred_id;
    std::string other_id;
    int weight = 0;
    View view = View::PaperCentric;

    friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

struct LoadedBenchmark {
    std::vector<BenchmarkRecord> records;  // deduplicated, in first-seen order
    std::size_t duplicates_dropped = 0;
};

/// Validates ratings against [1, scale_max] and keeps the last rating seen
/// for each (paper, reviewer) pair. With `known_papers` non-empty, every
/// record must reference one of them.
inline LoadedBenchmark load_benchmark(const std::vector<nlohmann::json>& rows, int scale_max = 5,
                                      const std::set<std::string>& known_papers = {}) {
    if (scale_max < 2) throw UsageError("rating scale must have at least two levels");
    LoadedBenchmark out;
    std::map<std::pair<std::string, std::string>, std::size_t> slot;
    std::size_t lineno = 0;
    for (const auto& row : rows) {
        ++lineno;
        BenchmarkRecord r;
        try {
            r.paper_id = row.at("paper_id").get<std::string>();
            r.reviewer_id = row.at("reviewer_id").get<std::string>();
            r.rating = row.at("rating").get<int>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError("benchmark record " + std::to_string(lineno) + ": " + e.what());
        }
        if (r.rating < 1 || r.rating > scale_max) {
            throw DataError("benchmark record " + std::to_string(lineno) + ": rating " + std::to_string(r.rating) +
                            " outside 1.." + std::to_string(scale_max));
        }
        if (!known_papers.empty() && known_papers.count(r.paper_id) == 0) {
            throw DataError("benchmark record " + std::to_string(lineno) + ": unknown paper " + r.paper_id);
        }
        const auto key = std::make_pair(r.paper_id, r.reviewer_id);
        const auto it = slot.find(key);
        if (it != slot.end()) {
            out.records[it->second] = r;
            ++out.duplicates_dropped;
            continue;
        }
        slot.emplace(key, out.records.size());
        out.records.push_back(std::move(r));
    }
    return out;
}

/// Ordered preference pairs for one view. Paper-centric groups by paper and
/// compares reviewers; reviewer-centric groups by reviewer and compares
/// papers. Equal ratings yield no pair. Output is sorted by anchor, then by
/// the item ids of the pair.
inline std::vector<PreferencePair> derive_pairs(const std::vector<BenchmarkRecord>& records, View view) {
    std::map<std::string, std::map<std::string, int>> groups;
    for (const auto& r : records) {
        const bool paper_view = view == View::PaperCentric;
        auto& group = groups[paper_view ? r.paper_id : r.reviewer_id];
        const auto& item = paper_view ? r.reviewer_id : r.paper_id;
        if (!group.emplace(item, r.rating).second) throw DataError("duplicate benchmark record for " + item);
    }
    std::vector<PreferencePair> pairs;
    for (const auto& [anchor, items] : groups) {
        for (auto x = items.begin(); x != items.end(); ++x) {
            for (auto y = std::next(x); y != items.end(); ++y) {
                if (x->second == y->second) continue;
                const bool x_wins = x->second > y->second;
                pairs.push_back({anchor, x_wins ? x->first : y->first, x_wins ? y->first : x->first,
                                 std::abs(x->second - y->second), view});
            }
        }
    }
    return pairs;
}

/// Predicted relevance per (paper id, reviewer id).
class ScoreTable {
  public:
    void set(const std::string& paper_id, const std::string& reviewer_id, double score) {
        scores_[{paper_id, reviewer_id}] = score;
    }

    std::optional<double> get(const std::string& paper_id, const std::string& reviewer_id) const {
        const auto it = scores_.find({paper_id, reviewer_id});
        if (it == scores_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return scores_.size(); }

  private:
    std::map<std::pair<std::string, std::string>, double> scores_;
};

/// (score of preferred, score of other) for a pair.
inline std::pair<double, double> pair_scores(const PreferencePair& p, const ScoreTable& scores) {
    const bool paper_view = p.view == View::PaperCentric;
    const auto preferred = paper_view ? scores.get(p.anchor_id, p.preferred_id) : scores.get(p.preferred_id, p.anchor_id);
    const auto other = paper_view ? scores.get(p.anchor_id, p.other_id) : scores.get(p.other_id, p.anchor_id);
    if (!preferred || !other) {
        throw DataError("missing score for pair (" + p.anchor_id + ": " + p.preferred_id + " > " + p.other_id + ")");
    }
    return {*preferred, *other};
}

/// Weighted share of misordered pairs: sum w * [s_preferred < s_other] / sum w.
/// Equal scores cost nothing.
inline double ranking_loss(const std::vector<PreferencePair>& pairs, const ScoreTable& scores) {
    if (pairs.empty()) throw DataError("ranking loss of an empty pair set");
    double wrong = 0.0;
    double total = 0.0;
    for (const auto& p : pairs) {
        const auto [sp, so] = pair_scores(p, scores);
        total += p.weight;
        if (sp < so) wrong += p.weight;
    }
    if (total <= 0.0) throw DataError("ranking loss with zero total weight");
    return wrong / total;
}

/// Share of pairs ordered strictly correctly; ties count as wrong.
inline double precision(const std::vector<PreferencePair>& pairs, const ScoreTable& scores) {
    if (pairs.empty()) throw DataError("precision of an empty pair set");
    std::size_t right = 0;
    for (const auto& p : pairs) {
        const auto [sp, so] = pair_scores(p, scores);
        if (sp > so) ++right;
    }
    return static_cast<double>(right) / static_cast<double>(pairs.size());
}

struct Histogram {
    std::map<int, std::size_t> counts;  // bucket -> count
    std::size_t total = 0;              // number of counted items

    double percent(int bucket) const {
        const auto it = counts.find(bucket);
        if (total == 0 || it == counts.end()) return 0.0;
        return 100.0 * static_cast<double>(it->second) / static_cast<double>(total);
    }
};

struct BenchmarkStats {
    std::size_t records = 0;
    std::size_t annotators = 0;
    std::size_t papers = 0;
    Histogram ratings;                // rating -> records
    Histogram papers_per_annotator;   // k -> annotators who rated k papers
    Histogram annotators_per_paper;   // k -> papers rated by k annotators
};

/// Rating distribution plus the two coverage histograms. Buckets 1..scale_max
/// (ratings) and 1..6 (coverage) are always present, zero-filled.
inline BenchmarkStats benchmark_stats(const std::vector<BenchmarkRecord>& records, int scale_max = 5) {
    BenchmarkStats s;
    s.records = records.size();
    for (int r = 1; r <= scale_max; ++r) s.ratings.counts[r] = 0;
    for (int k = 1; k <= 6; ++k) {
        s.papers_per_annotator.counts[k] = 0;
        s.annotators_per_paper.counts[k] = 0;
    }
    std::map<std::string, std::size_t> per_annotator;
    std::map<std::string, std::size_t> per_paper;
    for (const auto& r : records) {
        ++s.ratings.counts[r.rating];
        ++per_annotator[r.reviewer_id];
        ++per_paper[r.paper_id];
    }
    s.ratings.total = records.size();
    for (const auto& [_, k] : per_annotator) ++s.papers_per_annotator.counts[static_cast<int>(k)];
    for (const auto& [_, k] : per_paper) ++s.annotators_per_paper.counts[static_cast<int>(k)];
    s.annotators = per_annotator.size();
    s.papers = per_paper.size();
    s.papers_per_annotator.total = s.annotators;
    s.annotators_per_paper.total = s.papers;
    return s;
}

inline nlohmann::json to_json(const Histogram& h) {
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json pct = nlohmann::json::object();
    for (const auto& [bucket, count] : h.counts) {
        counts[std::to_string(bucket)] = count;
        pct[std::to_string(bucket)] = h.percent(bucket);
    }
    return {{"total", h.total}, {"counts", counts}, {"percent", pct}};
}

inline nlohmann::json to_json(const BenchmarkStats& s) {
    return {{"records", s.records},
            {"annotators", s.annotators},
            {"papers", s.papers},
            {"rating_distribution", to_json(s.ratings)},
            {"papers_per_annotator", to_json(s.papers_per_annotator)},
            {"annotators_per_paper", to_json(s.annotators_per_paper)}};
}

}  // namespace revmatch::eval
