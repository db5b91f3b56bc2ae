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

#include <cmath>
#include <numbers>

#include "revmatch/dense/pooling.hpp"
#include "revmatch/dense/store.hpp"
#include "revmatch/random.hpp"

using namespace revmatch;
using namespace revmatch::dense;

namespace {

std::vector<double> at_angle(double degrees) {
    const double rad = degrees * (std::numbers::pi / 180.0);
    return {std::cos(rad), std::sin(rad)};
}

struct Pooled {
    const char* reviewer;
    std::vector<double> angles;
    double mean, p75, max;
};

// Values from tests/oracles/pooling_oracle.py.
const std::vector<Pooled> kFixture = {
    {"r00", {0, 10, 20}, 0.9748334579327055, 0.9924038765061041, 1.0},
    {"r01", {5}, 0.9961946980917455, 0.9961946980917455, 0.9961946980917455},
    {"r02", {30, 60, 90, 120}, 0.2165063509461098, 0.5915063509461098, 0.8660254037844387},
    {"r03", {15, 15, 15}, 0.9659258262890683, 0.9659258262890683, 0.9659258262890683},
    {"r04", {80, 2}, 0.5865195023430131, 0.7929551646810544, 0.9993908270190958},
    {"r05", {45, 50, 55, 60, 65}, 0.5692178177929665, 0.6427876096865394, 0.7071067811865476},
    {"r06", {170, 10}, 0.0, 0.492403876506104, 0.984807753012208},
    {"r07", {25, 35}, 0.8627299156628209, 0.8845188513497354, 0.9063077870366499},
    {"r08", {90, 90, 89, 1, 40, 70}, 0.35422744800638695, 0.6600383681706508, 0.9998476951563913},
    {"r09", {60, 0, 0, 0}, 0.875, 1.0, 1.0},
};

}  // namespace

TEST(Store, NormalizesOnInsertAndCosineIsDot) {
    EmbeddingStore s;
    s.insert("a", std::vector<double>{3.0, 4.0});
    EXPECT_EQ(s.dim(), 2u);
    EXPECT_NEAR(s.vector("a")[0], 0.6, 1e-15);
    EXPECT_NEAR(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 1}), std::sqrt(0.5), 1e-15);
}

TEST(Store, RejectsBadVectors) {
    EmbeddingStore s(3);
    EXPECT_THROW(s.insert("a", std::vector<double>{1, 2}), DimensionMismatch);
    EXPECT_THROW(s.insert("a", std::vector<double>{0, 0, 0}), DataError);
    EXPECT_THROW(s.insert("a", std::vector<double>{NAN, 1, 0}), DataError);
    EXPECT_THROW(s.vector("missing"), LookupError);
    EXPECT_THROW(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}), DimensionMismatch);
}

TEST(Store, ReinsertReplaces) {
    EmbeddingStore s;
    s.insert("a", std::vector<double>{1, 0});
    s.insert("a", std::vector<double>{0, 2});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.vector("a")[1], 1.0);
}

TEST(Store, ThresholdRecallIsStrict) {
    EmbeddingStore s;
    s.insert("same", at_angle(0));
    s.insert("near", at_angle(30));
    s.insert("ortho", at_angle(90));
    s.insert("opposite", at_angle(180));
    EXPECT_EQ(s.threshold_recall(at_angle(0), 0.5), (std::set<std::string>{"same", "near"}));
    EXPECT_EQ(s.threshold_recall(std::vector<double>{1, 0}, 1.0), std::set<std::string>{});
    EXPECT_EQ(s.threshold_recall(std::vector<double>{1, 0}, -1.0).size(), 3u);
    EXPECT_THROW(s.threshold_recall(std::vector<double>{1, 0}, 1.5), UsageError);
    EXPECT_THROW(s.threshold_recall(std::vector<double>{1, 0, 0}, 0.1), DimensionMismatch);
}

TEST(Store, RecallIsMonotoneInThreshold) {
    Rng rng(3);
    EmbeddingStore s;
    for (int i = 0; i < 50; ++i) s.insert("v" + std::to_string(i), std::vector<double>{rng.normal(), rng.normal(), rng.normal()});
    const std::vector<double> q{rng.normal(), rng.normal(), rng.normal()};
    std::size_t prev = s.size() + 1;
    for (double t = -1.0; t <= 1.0; t += 0.1) {
        const auto hits = s.threshold_recall(q, t);
        EXPECT_LE(hits.size(), prev);
        prev = hits.size();
    }
}

TEST(Store, BinaryRoundTripIsFloat32Exact) {
    Rng rng(11);
    EmbeddingStore s;
    for (int i = 0; i < 10; ++i) s.insert("id-" + std::to_string(i), std::vector<double>{rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    const auto bytes = s.serialize();
    const auto back = EmbeddingStore::deserialize(bytes);
    ASSERT_EQ(back.ids(), s.ids());
    for (const auto& id : s.ids()) {
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(back.vector(id)[k], s.vector(id)[k], 1e-6);
    }
    EXPECT_EQ(back.serialize(), bytes);
    EXPECT_THROW(EmbeddingStore::deserialize(bytes.substr(0, bytes.size() - 1)), DataError);
    EXPECT_THROW(EmbeddingStore::deserialize("garbage!"), DataError);
}

TEST(Pooling, ListExamples) {
    const std::vector<double> sims{0.2, 0.4, 0.9};
    EXPECT_NEAR(pool_scores(sims, Pooling::Mean), 0.5, 1e-15);
    EXPECT_NEAR(pool_scores(sims, Pooling::P75), 0.65, 1e-15);
    EXPECT_EQ(pool_scores(sims, Pooling::Max), 0.9);
    EXPECT_EQ(pool_scores({0.3}, Pooling::P75), 0.3);
    EXPECT_THROW(pool_scores({}, Pooling::Mean), DataError);
    EXPECT_THROW(pool_scores({0.1, NAN}, Pooling::Max), DataError);
}

TEST(Pooling, OrderingBetweenStrategies) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> sims(1 + rng.uniform_index(8));
        for (auto& s : sims) s = rng.uniform(-1, 1);
        const double mx = pool_scores(sims, Pooling::Max);
        EXPECT_LE(pool_scores(sims, Pooling::P75), mx);
        EXPECT_LE(pool_scores(sims, Pooling::Mean), mx);
        EXPECT_GE(pool_scores(sims, Pooling::Mean), *std::min_element(sims.begin(), sims.end()));
    }
}

TEST(Pooling, ParseNames) {
    EXPECT_EQ(parse_pooling("p75"), Pooling::P75);
    EXPECT_EQ(to_string(Pooling::Max), "max");
    EXPECT_EQ(parse_pooling("median"), std::nullopt);
}

TEST(Pooling, TenReviewerFixtureMatchesHandPooled) {
    EmbeddingStore papers;
    papers.insert("query", at_angle(0));
    for (const auto& r : kFixture) {
        std::vector<std::string> pubs;
        for (std::size_t k = 0; k < r.angles.size(); ++k) {
            pubs.push_back(std::string(r.reviewer) + "/" + std::to_string(k));
            papers.insert(pubs.back(), at_angle(r.angles[k]));
        }
        EXPECT_NEAR(baseline_reviewer_score(papers, "query", r.reviewer, pubs, Pooling::Mean), r.mean, 1e-12) << r.reviewer;
        EXPECT_NEAR(baseline_reviewer_score(papers, "query", r.reviewer, pubs, Pooling::P75), r.p75, 1e-12) << r.reviewer;
        EXPECT_NEAR(baseline_reviewer_score(papers, "query", r.reviewer, pubs, Pooling::Max), r.max, 1e-12) << r.reviewer;
    }
}

TEST(Pooling, OneOffTopicPaperFlipsMaxButNotMean) {
    EmbeddingStore papers;
    papers.insert("query", at_angle(0));
    // Steady reviewer: every paper moderately on topic.
    const std::vector<std::string> steady{"s1", "s2", "s3"};
    papers.insert("s1", at_angle(30));
    papers.insert("s2", at_angle(35));
    papers.insert("s3", at_angle(40));
    // Drifted reviewer: mostly elsewhere, one near-duplicate of the query.
    const std::vector<std::string> drifted{"d1", "d2", "d3"};
    papers.insert("d1", at_angle(3));
    papers.insert("d2", at_angle(85));
    papers.insert("d3", at_angle(88));
    auto score = [&](const std::vector<std::string>& pubs, Pooling p) {
        return baseline_reviewer_score(papers, "query", "x", pubs, p);
    };
    EXPECT_GT(score(drifted, Pooling::Max), score(steady, Pooling::Max));
    EXPECT_LT(score(drifted, Pooling::Mean), score(steady, Pooling::Mean));
}

TEST(Pooling, ColdStartWhenNothingEmbedded) {
    EmbeddingStore papers;
    papers.insert("query", at_angle(0));
    corpus::Author a;
    a.author_id = "A";
    a.paper_ids = {"gone"};
    EXPECT_THROW(baseline_reviewer_score(papers, "query", a, Pooling::Mean), ColdStartError);
}
