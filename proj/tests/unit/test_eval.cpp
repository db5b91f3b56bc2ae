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

#include <gtest/gtest.h>

#include "revmatch/eval/benchmark.hpp"
#include "revmatch/eval/report.hpp"
#include "revmatch/jsonl.hpp"
#include "revmatch/random.hpp"

using namespace revmatch;
using namespace revmatch::eval;
using json = nlohmann::json;

namespace {

json row(const std::string& p, const std::string& r, int rating) {
    return {{"paper_id", p}, {"reviewer_id", r}, {"rating", rating}};
}

std::vector<BenchmarkRecord> random_records(Rng& rng, std::size_t n, int papers, int reviewers) {
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<BenchmarkRecord> out;
    while (out.size() < n) {
        const auto p = "p" + std::to_string(rng.uniform_index(static_cast<std::uint64_t>(papers)));
        const auto r = "r" + std::to_string(rng.uniform_index(static_cast<std::uint64_t>(reviewers)));
        if (!seen.emplace(p, r).second) continue;
        out.push_back({p, r, 1 + static_cast<int>(rng.uniform_index(5))});
    }
    return out;
}

}  // namespace

TEST(Load, ValidatesAndDeduplicates) {
    const auto b = load_benchmark({row("p", "a", 5), row("p", "b", 2), row("p", "a", 3)});
    ASSERT_EQ(b.records.size(), 2u);
    EXPECT_EQ(b.duplicates_dropped, 1u);
    EXPECT_EQ(b.records[0].rating, 3);  // later record wins, position kept
    EXPECT_THROW(load_benchmark({row("p", "a", 6)}), DataError);
    EXPECT_THROW(load_benchmark({row("p", "a", 0)}), DataError);
    EXPECT_THROW(load_benchmark({json{{"paper_id", "p"}, {"rating", 3}}}), DataError);
    EXPECT_THROW(load_benchmark({row("ghost", "a", 3)}, 5, {"p"}), DataError);
    EXPECT_NO_THROW(load_benchmark({row("p", "a", 7)}, 7));
}

TEST(Pairs, TiesAreDiscarded) {
    const std::vector<BenchmarkRecord> recs{{"q", "r1", 5}, {"q", "r2", 3}, {"q", "r3", 3}};
    const auto pairs = derive_pairs(recs, View::PaperCentric);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0], (PreferencePair{"q", "r1", "r2", 2, View::PaperCentric}));
    EXPECT_EQ(pairs[1], (PreferencePair{"q", "r1", "r3", 2, View::PaperCentric}));
    EXPECT_TRUE(derive_pairs(recs, View::ReviewerCentric).empty());
}

TEST(Pairs, ReviewerCentricGroupsByReviewer) {
    const std::vector<BenchmarkRecord> recs{{"p1", "r", 1}, {"p2", "r", 4}, {"p3", "s", 2}};
    const auto pairs = derive_pairs(recs, View::ReviewerCentric);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0], (PreferencePair{"r", "p2", "p1", 3, View::ReviewerCentric}));
}

TEST(Pairs, MatchBruteForceEnumeration) {
    Rng rng(30);
    for (int trial = 0; trial < 20; ++trial) {
        const auto recs = random_records(rng, 30, 6, 8);
        for (const auto view : {View::PaperCentric, View::ReviewerCentric}) {
            std::multiset<std::tuple<std::string, std::string, std::string, int>> expect;
            for (std::size_t i = 0; i < recs.size(); ++i) {
                for (std::size_t j = 0; j < recs.size(); ++j) {
                    const auto& x = recs[i];
                    const auto& y = recs[j];
                    const bool same = view == View::PaperCentric ? x.paper_id == y.paper_id : x.reviewer_id == y.reviewer_id;
                    if (!same || x.rating <= y.rating) continue;
                    const auto& anchor = view == View::PaperCentric ? x.paper_id : x.reviewer_id;
                    const auto& a = view == View::PaperCentric ? x.reviewer_id : x.paper_id;
                    const auto& b = view == View::PaperCentric ? y.reviewer_id : y.paper_id;
                    expect.emplace(anchor, a, b, x.rating - y.rating);
                }
            }
            std::multiset<std::tuple<std::string, std::string, std::string, int>> got;
            for (const auto& p : derive_pairs(recs, view)) {
                EXPECT_GE(p.weight, 1);
                EXPECT_LE(p.weight, 4);
                got.emplace(p.anchor_id, p.preferred_id, p.other_id, p.weight);
            }
            EXPECT_EQ(got, expect);
        }
    }
}

TEST(Metrics, SixPairFixture) {
    // Weights 2,1,1,2,2,1 (total 9); the first two pairs are misordered.
    const std::vector<PreferencePair> pairs{
        {"q", "a", "b", 2, View::PaperCentric}, {"q", "c", "d", 1, View::PaperCentric},
        {"q", "e", "f", 1, View::PaperCentric}, {"q", "g", "h", 2, View::PaperCentric},
        {"q", "i", "j", 2, View::PaperCentric}, {"q", "k", "l", 1, View::PaperCentric},
    };
    ScoreTable s;
    const std::vector<std::pair<double, double>> scores{{0.1, 0.5}, {0.2, 0.3}, {0.9, 0.1}, {0.8, 0.7}, {0.6, 0.2}, {0.4, 0.3}};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        s.set("q", pairs[i].preferred_id, scores[i].first);
        s.set("q", pairs[i].other_id, scores[i].second);
    }
    EXPECT_NEAR(ranking_loss(pairs, s), 3.0 / 9.0, 1e-15);
    EXPECT_NEAR(precision(pairs, s), 4.0 / 6.0, 1e-15);
}

TEST(Metrics, TiesAreFreeForLossButFailPrecision) {
    const std::vector<PreferencePair> pairs{{"q", "a", "b", 3, View::PaperCentric}};
    ScoreTable s;
    s.set("q", "a", 0.5);
    s.set("q", "b", 0.5);
    EXPECT_EQ(ranking_loss(pairs, s), 0.0);
    EXPECT_EQ(precision(pairs, s), 0.0);
}

TEST(Metrics, ReviewerCentricLooksUpPaperReviewerScores) {
    const std::vector<PreferencePair> pairs{{"r", "p1", "p2", 1, View::ReviewerCentric}};
    ScoreTable s;
    s.set("p1", "r", 0.9);
    s.set("p2", "r", 0.1);
    EXPECT_EQ(precision(pairs, s), 1.0);
}

TEST(Metrics, ErrorsAreTyped) {
    ScoreTable s;
    s.set("q", "a", 1.0);
    const std::vector<PreferencePair> pairs{{"q", "a", "zz", 1, View::PaperCentric}};
    try {
        ranking_loss(pairs, s);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
    }
    EXPECT_THROW(precision({}, s), DataError);
    EXPECT_THROW(ranking_loss({}, s), DataError);
}

TEST(Metrics, PropertiesOnRandomScores) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto recs = random_records(rng, 25, 5, 7);
        const auto pairs = derive_pairs(recs, View::PaperCentric);
        if (pairs.empty()) continue;
        ScoreTable s, neg, mono;
        for (const auto& r : recs) {
            const double v = rng.uniform(-1, 1);
            s.set(r.paper_id, r.reviewer_id, v);
            neg.set(r.paper_id, r.reviewer_id, -v);
            mono.set(r.paper_id, r.reviewer_id, std::exp(3 * v) + 2);
        }
        const double loss = ranking_loss(pairs, s);
        EXPECT_GE(loss, 0.0);
        EXPECT_LE(loss, 1.0);
        EXPECT_NEAR(loss + ranking_loss(pairs, neg), 1.0, 1e-12);
        EXPECT_EQ(precision(pairs, mono), precision(pairs, s));
        EXPECT_EQ(ranking_loss(pairs, mono), loss);
    }
}

TEST(Metrics, PerfectAndInverted) {
    const std::vector<BenchmarkRecord> recs{{"q", "a", 5}, {"q", "b", 3}, {"q", "c", 1}};
    const auto pairs = derive_pairs(recs, View::PaperCentric);
    ScoreTable good, bad;
    for (const auto& r : recs) {
        good.set(r.paper_id, r.reviewer_id, r.rating);
        bad.set(r.paper_id, r.reviewer_id, -r.rating);
    }
    EXPECT_EQ(ranking_loss(pairs, good), 0.0);
    EXPECT_EQ(precision(pairs, good), 1.0);
    EXPECT_EQ(ranking_loss(pairs, bad), 1.0);
}

TEST(Stats, SyntheticFixtureMatchesOracleCounts) {
    const auto b = load_benchmark(io::read_jsonl(std::string(REVMATCH_TEST_DATA) + "/benchmark/synthetic50.jsonl"));
    const auto s = benchmark_stats(b.records);
    EXPECT_EQ(s.records, 50u);
    EXPECT_EQ(s.annotators, 13u);
    EXPECT_EQ(s.papers, 12u);
    const std::vector<std::size_t> ratings{6, 3, 7, 16, 18};
    const std::vector<std::size_t> ppa{1, 2, 0, 7, 1, 2};
    const std::vector<std::size_t> app{0, 1, 4, 1, 4, 2};
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(s.ratings.counts.at(k), ratings[k - 1]);
    for (int k = 1; k <= 6; ++k) {
        EXPECT_EQ(s.papers_per_annotator.counts.at(k), ppa[k - 1]);
        EXPECT_EQ(s.annotators_per_paper.counts.at(k), app[k - 1]);
    }
    EXPECT_NEAR(s.ratings.percent(5), 36.0, 1e-12);
    EXPECT_EQ(derive_pairs(b.records, View::PaperCentric).size(), 61u);
    EXPECT_EQ(derive_pairs(b.records, View::ReviewerCentric).size(), 68u);
}

TEST(Stats, EmptyInputIsAllZero) {
    const auto s = benchmark_stats({});
    EXPECT_EQ(s.records, 0u);
    for (const auto& [_, c] : s.ratings.counts) EXPECT_EQ(c, 0u);
    EXPECT_EQ(s.ratings.percent(3), 0.0);
}

TEST(Report, CombinedViewPoolsPairs) {
    const std::vector<BenchmarkRecord> recs{{"q", "a", 5}, {"q", "b", 3}, {"q2", "a", 1}};
    ScoreTable s;
    s.set("q", "a", 0.9);
    s.set("q", "b", 0.1);
    s.set("q2", "a", 0.5);
    const auto r = evaluate_benchmark(recs, s, "bm25");
    EXPECT_EQ(r.paper_centric.pairs, 1u);
    EXPECT_EQ(r.reviewer_centric.pairs, 1u);
    EXPECT_EQ(r.combined.pairs, 2u);
    EXPECT_EQ(*r.combined.precision, 1.0);
    EXPECT_EQ(to_tsv(r),
              "view\tpairs\tloss\tprecision\n"
              "paper_centric\t1\t0.000000\t1.000000\n"
              "reviewer_centric\t1\t0.000000\t1.000000\n"
              "combined\t2\t0.000000\t1.000000\n");
    const auto none = evaluate_benchmark({{"q", "a", 3}}, s, "bm25");
    EXPECT_FALSE(none.combined.loss);
    EXPECT_TRUE(to_json(none)["combined"]["loss"].is_null());
}
