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

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "revmatch/coi/coi.hpp"
#include "revmatch/corpus/corpus.hpp"
#include "revmatch/error.hpp"
#include "revmatch/lexical/bm25.hpp"
#include "revmatch/profile/profile.hpp"
#include "revmatch/random.hpp"

namespace revmatch::prefgen {

enum class View { PaperCentric, ReviewerCentric };
enum class Difficulty { Easy, Hard };

inline std::string_view to_string(View v) { return v == View::PaperCentric ? "paper_centric" : "reviewer_centric"; }
inline std::string_view to_string(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

inline View parse_view(std::string_view s) {
    if (s == "paper_centric") return View::PaperCentric;
    if (s == "reviewer_centric") return View::ReviewerCentric;
    throw DataError("unknown view " + std::string(s));
}

inline Difficulty parse_difficulty(std::string_view s) {
    if (s == "easy") return Difficulty::Easy;
    if (s == "hard") return Difficulty::Hard;
    throw DataError("unknown difficulty " + std::string(s));
}

/// Paper-centric anchors are paper ids with reviewer (author id) candidates;
/// reviewer-centric anchors are author ids with paper candidates.
struct PreferenceTriplet {
    std::string anchor_id;
    View view = View::PaperCentric;
    std::string positive_id;
    std::string negative_id;
    Difficulty difficulty = Difficulty::Hard;
    double positive_score = 0.0;
    double negative_score = 0.0;

    friend bool operator==(const PreferenceTriplet&, const PreferenceTriplet&) = default;
};

/// Fractions of the positive score targeted by the easy and hard negatives.
inline constexpr double kEasyRatio = 1.0 / 10.0;
inline constexpr double kHardRatio = 1.0 / 3.0;
/// Positive plus two distinct negatives.
inline constexpr std::size_t kMinScoredCandidates = 3;

/// Index into `ranked` of the eligible candidate nearest to `target`;
/// ties go to the smaller doc id.
inline std::optional<std::size_t> nearest_to(const std::vector<lexical::ScoredDoc>& ranked,
                                             const std::vector<std::size_t>& eligible, double target) {
    std::optional<std::size_t> best;
    double best_gap = 0.0;
    for (auto i : eligible) {
        const double gap = std::abs(ranked[i].score - target);
        if (!best || gap < best_gap || (gap == best_gap && ranked[i].doc_id < ranked[*best].doc_id)) {
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

/// Picks the positive and the ratio-targeted negatives from a BM25 ranking
/// (descending score, ties by id).
///
/// The positive is the top entry and must score > 0. Negatives are drawn from
/// candidates scoring strictly between 0 and the positive score: the hard one
/// nearest s+/3, the easy one nearest s+/10. Returns the hard triplet, then
/// the easy one unless both picks coincide. Fewer than three positively scored
/// candidates yields nothing.
inline std::vector<PreferenceTriplet> select_triplets(const std::string& anchor_id, View view,
                                                      const std::vector<lexical::ScoredDoc>& ranked) {
    std::size_t scored = 0;
    for (const auto& r : ranked) scored += r.score > 0.0 ? 1 : 0;
    if (scored < kMinScoredCandidates) return {};

    const auto& top = ranked.front();
    std::vector<std::size_t> eligible;
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        if (ranked[i].score > 0.0 && ranked[i].score < top.score) eligible.push_back(i);
    }
    if (eligible.empty()) return {};

    const auto hard = *nearest_to(ranked, eligible, top.score * kHardRatio);
    const auto easy = *nearest_to(ranked, eligible, top.score * kEasyRatio);

    auto make = [&](std::size_t neg, Difficulty d) {
        return PreferenceTriplet{anchor_id, view, top.doc_id, ranked[neg].doc_id, d, top.score, ranked[neg].score};
    };
    std::vector<PreferenceTriplet> out{make(hard, Difficulty::Hard)};
    if (easy != hard) out.push_back(make(easy, Difficulty::Easy));
    return out;
}

/// Ranks `candidates` minus `excluded` by BM25 against the anchor text and
/// applies select_triplets. `index` must hold the candidate documents.
inline std::vector<PreferenceTriplet> build_triplets(const std::string& anchor_id, std::string_view anchor_text, View view,
                                                     const std::vector<std::string>& candidates,
                                                     const lexical::Bm25Index& index,
                                                     const std::set<std::string>& excluded) {
    const auto query = lexical::tokenize(anchor_text);
    if (query.empty()) throw DataError("anchor " + anchor_id + " has no indexable text");
    std::vector<std::string> pool;
    pool.reserve(candidates.size());
    for (const auto& c : candidates) {
        if (c != anchor_id && excluded.count(c) == 0) pool.push_back(c);
    }
    return select_triplets(anchor_id, view, index.rank(query, pool));
}

/// Papers indexed as documents (ids = paper ids) and reviewer profiles
/// indexed as documents (ids = author ids).
struct IndexPair {
    const lexical::Bm25Index& papers;
    const lexical::Bm25Index& profiles;
};

struct GenerationResult {
    std::vector<PreferenceTriplet> triplets;
    std::size_t shortfall = 0;  // budget minus emitted, when anchors ran out
    std::size_t anchors_visited = 0;
};

/// Candidate reviewers for a paper anchor: every profiled reviewer except the
/// paper's authors and their direct co-authors (unless `apply_coi` is off).
inline std::vector<std::string> paper_anchor_candidates(const corpus::Corpus& corpus, const IndexPair& indexes,
                                                        const std::string& paper_id, bool apply_coi = true) {
    const auto& authors = corpus.authors_of(paper_id);
    std::vector<std::string> out;
    for (const auto& r : indexes.profiles.doc_ids()) {
        if (!apply_coi || !coi::conflicted(r, authors, corpus.graph())) out.push_back(r);
    }
    return out;
}

/// Candidate papers for a reviewer anchor: every indexed paper outside
/// `holdout` none of whose authors is the reviewer or a direct co-author.
inline std::vector<std::string> reviewer_anchor_candidates(const corpus::Corpus& corpus, const IndexPair& indexes,
                                                           const std::string& author_id,
                                                           const std::set<std::string>& holdout,
                                                           bool apply_coi = true) {
    std::vector<std::string> out;
    for (const auto& p : indexes.papers.doc_ids()) {
        if (holdout.count(p) != 0) continue;
        if (apply_coi && coi::conflicted(author_id, corpus.authors_of(p), corpus.graph())) continue;
        out.push_back(p);
    }
    return out;
}

/// Seeded dual-view sampling of preference triplets.
///
/// Paper anchors (indexed, not held out) and reviewer anchors (profiled) are
/// each shuffled with `seed`; anchors are then drawn alternately, paper view
/// first, each at most once, until `budget` triplets exist or both lists run
/// out. Held-out papers never appear in any triplet.
inline GenerationResult generate_training_set(const corpus::Corpus& corpus,
                                              const std::vector<profile::ReviewerProfile>& profiles,
                                              const IndexPair& indexes, std::size_t budget, std::uint64_t seed,
                                              const std::set<std::string>& holdout, bool apply_coi = true) {
    GenerationResult result;
    if (budget == 0) return result;

    std::map<std::string, const profile::ReviewerProfile*> profile_by_id;
    for (const auto& p : profiles) profile_by_id.emplace(p.author_id, &p);

    std::vector<std::string> paper_anchors;
    for (const auto& pid : indexes.papers.doc_ids()) {
        if (holdout.count(pid) == 0 && corpus.has_paper(pid)) paper_anchors.push_back(pid);
    }
    std::vector<std::string> reviewer_anchors;
    for (const auto& rid : indexes.profiles.doc_ids()) {
        if (profile_by_id.count(rid) != 0) reviewer_anchors.push_back(rid);
    }
    std::sort(paper_anchors.begin(), paper_anchors.end());
    std::sort(reviewer_anchors.begin(), reviewer_anchors.end());
    Rng rng(seed);
    rng.shuffle(std::span<std::string>(paper_anchors));
    rng.shuffle(std::span<std::string>(reviewer_anchors));

    std::size_t next_paper = 0;
    std::size_t next_reviewer = 0;
    bool paper_turn = true;
    while (result.triplets.size() < budget &&
           (next_paper < paper_anchors.size() || next_reviewer < reviewer_anchors.size())) {
        const bool use_paper =
            next_reviewer >= reviewer_anchors.size() || (paper_turn && next_paper < paper_anchors.size());
        paper_turn = !paper_turn;
        std::vector<PreferenceTriplet> emitted;
        if (use_paper) {
            const auto& q = paper_anchors[next_paper++];
            const auto& paper = corpus.paper(q);
            emitted = build_triplets(q, paper.text(), View::PaperCentric, paper_anchor_candidates(corpus, indexes, q, apply_coi),
                                     indexes.profiles, {});
        } else {
            const auto& r = reviewer_anchors[next_reviewer++];
            emitted = build_triplets(r, profile_by_id.at(r)->text, View::ReviewerCentric,
                                     reviewer_anchor_candidates(corpus, indexes, r, holdout, apply_coi), indexes.papers, holdout);
        }
        ++result.anchors_visited;
        for (auto& t : emitted) {
            if (result.triplets.size() == budget) break;
            result.triplets.push_back(std::move(t));
        }
    }
    result.shortfall = budget - result.triplets.size();
    return result;
}

inline nlohmann::json to_json(const PreferenceTriplet& t) {
    return {{"anchor_id", t.anchor_id},
            {"view", std::string(to_string(t.view))},
            {"positive_id", t.positive_id},
            {"negative_id", t.negative_id},
            {"difficulty", std::string(to_string(t.difficulty))},
            {"s_pos", t.positive_score},
            {"s_neg", t.negative_score}};
}

inline PreferenceTriplet triplet_from_json(const nlohmann::json& j) {
    return {j.at("anchor_id").get<std::string>(),
            parse_view(j.at("view").get<std::string>()),
            j.at("positive_id").get<std::string>(),
            j.at("negative_id").get<std::string>(),
            parse_difficulty(j.at("difficulty").get<std::string>()),
            j.at("s_pos").get<double>(),
            j.at("s_neg").get<double>()};
}

}  // namespace revmatch::prefgen
