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

#include "revmatch/lexical/bm25.hpp"
#include "revmatch/lexical/tfidf.hpp"
#include "revmatch/random.hpp"

using namespace revmatch;
using namespace revmatch::lexical;

namespace {

// Same fixture as tests/oracles/lexical_oracle.py.
const std::vector<std::pair<std::string, std::string>> kDocs = {
    {"d1", "graph neural networks for molecule property prediction"},
    {"d2", "graph retrieval with dense embeddings and graph pruning"},
    {"d3", "protein folding prediction with deep networks"},
    {"d4", "reviewer assignment by expertise retrieval"},
    {"d5", "a short note"},
};

std::vector<std::string> ids(const std::vector<ScoredDoc>& r) {
    std::vector<std::string> out;
    for (const auto& d : r) out.push_back(d.doc_id);
    return out;
}

const std::vector<std::string> kAll = {"d1", "d2", "d3", "d4", "d5"};

}  // namespace

TEST(Bm25, SingleDocumentSingleTerm) {
    const auto index = Bm25Index::build({{"x", "alpha"}});
    EXPECT_NEAR(index.score({"alpha"}, "x"), 0.28768207245178085, 1e-12);
    EXPECT_NEAR(index.score({"alpha"}, "x"), std::log(4.0 / 3.0), 1e-12);
}

TEST(Bm25, FixtureMatchesOracle) {
    const auto index = Bm25Index::build(kDocs);
    const auto q = tokenize("graph networks");
    EXPECT_NEAR(index.score(q, "d1"), 1.5884793584977979, 1e-12);
    EXPECT_NEAR(index.score(q, "d2"), 1.0742803629681323, 1e-12);
    EXPECT_NEAR(index.score(q, "d3"), 0.8506131580599406, 1e-12);
    EXPECT_EQ(index.score(q, "d4"), 0.0);
    const auto q2 = tokenize("retrieval expertise graph");
    EXPECT_NEAR(index.score(q2, "d1"), 0.7942396792488989, 1e-12);
    EXPECT_NEAR(index.score(q2, "d2"), 1.8191543162968649, 1e-12);
    EXPECT_NEAR(index.score(q2, "d4"), 2.3654432405090913, 1e-12);
    EXPECT_EQ(ids(index.rank(q2, kAll)), (std::vector<std::string>{"d4", "d2", "d1", "d3", "d5"}));
}

TEST(Bm25, UnknownTermsScoreZeroAndTiesBreakById) {
    const auto index = Bm25Index::build(kDocs);
    const auto ranked = index.rank(tokenize("unseen words"), {"d3", "d1", "d2"});
    EXPECT_EQ(ids(ranked), (std::vector<std::string>{"d1", "d2", "d3"}));
    for (const auto& r : ranked) EXPECT_EQ(r.score, 0.0);
}

TEST(Bm25, RepeatedQueryTermsCountTwice) {
    const auto index = Bm25Index::build(kDocs);
    EXPECT_NEAR(index.score({"graph", "graph"}, "d1"), 2 * index.score({"graph"}, "d1"), 1e-15);
}

TEST(Bm25, IdfIsPositiveEvenForUbiquitousTerms) {
    const auto index = Bm25Index::build({{"a", "xx yy"}, {"b", "xx"}, {"c", "xx zz"}});
    EXPECT_GT(index.idf("xx"), 0.0);
    EXPECT_NEAR(index.idf("xx"), std::log(1.0 + 0.5 / 3.5), 1e-15);
}

TEST(Bm25, UnknownDocumentIsLookupError) {
    const auto index = Bm25Index::build(kDocs);
    EXPECT_THROW(index.score({"graph"}, "nope"), LookupError);
    EXPECT_THROW(Bm25Index::build({{"a", "x"}, {"a", "y"}}), DataError);
}

TEST(Bm25, EmptyDocumentIsIndexed) {
    const auto index = Bm25Index::build({{"a", ""}, {"b", "graph"}});
    EXPECT_EQ(index.doc_length("a"), 0u);
    EXPECT_EQ(index.score({"graph"}, "a"), 0.0);
}

TEST(Bm25, JsonRoundTripPreservesScores) {
    const auto index = Bm25Index::build(kDocs, {1.5, 0.6});
    const auto back = Bm25Index::from_json(nlohmann::json::parse(index.to_json().dump()));
    EXPECT_EQ(back.params().k1, 1.5);
    for (const auto& id : kAll) {
        EXPECT_EQ(back.score(tokenize("graph retrieval prediction"), id), index.score(tokenize("graph retrieval prediction"), id));
        EXPECT_EQ(back.term_frequencies(id), index.term_frequencies(id));
    }
    auto bad = index.to_json();
    bad["version"] = 99;
    EXPECT_THROW(Bm25Index::from_json(bad), DataError);
}

// Formula-direct scorer over raw token lists, used as a randomized oracle.
TEST(Bm25, MatchesBruteForceOnRandomCorpora) {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n_docs = 1 + rng.uniform_index(15);
        std::vector<std::pair<std::string, std::vector<std::string>>> docs;
        for (std::size_t d = 0; d < n_docs; ++d) {
            std::vector<std::string> toks;
            const auto len = rng.uniform_index(12);
            for (std::size_t i = 0; i < len; ++i) toks.push_back("w" + std::to_string(rng.uniform_index(10)));
            docs.emplace_back("doc" + std::to_string(d), toks);
        }
        const Bm25Params params{0.5 + rng.uniform01(), rng.uniform01()};
        const auto index = Bm25Index::build_tokenized(docs, params);
        double avg = 0;
        for (const auto& [_, t] : docs) avg += static_cast<double>(t.size());
        avg /= static_cast<double>(docs.size());
        std::vector<std::string> query;
        for (std::size_t i = 0; i < 1 + rng.uniform_index(6); ++i) query.push_back("w" + std::to_string(rng.uniform_index(12)));
        for (const auto& [id, toks] : docs) {
            double expect = 0;
            for (const auto& q : query) {
                const double tf = static_cast<double>(std::count(toks.begin(), toks.end(), q));
                if (tf == 0) continue;
                double df = 0;
                for (const auto& [_, other] : docs) df += std::count(other.begin(), other.end(), q) > 0 ? 1 : 0;
                const double n = static_cast<double>(docs.size());
                const double idf = std::log(1 + (n - df + 0.5) / (df + 0.5));
                const double norm = avg > 0 ? 1 - params.b + params.b * static_cast<double>(toks.size()) / avg : 1.0;
                expect += idf * tf * (params.k1 + 1) / (tf + params.k1 * norm);
            }
            EXPECT_NEAR(index.score(query, id), expect, 1e-9);
        }
    }
}

TEST(Tfidf, FixtureMatchesOracle) {
    const auto index = Bm25Index::build(kDocs);
    EXPECT_NEAR(tfidf_cosine(index, kDocs[0].second, kDocs[1].second), 0.1330279702446245, 1e-12);
    EXPECT_NEAR(tfidf_cosine(index, kDocs[0].second, kDocs[2].second), 0.19786309691012655, 1e-12);
    EXPECT_NEAR(tfidf_cosine(index, "expertise retrieval for reviewers", kDocs[3].second), 0.44543519136400805, 1e-12);
}

TEST(Tfidf, SelfSimilarityAndOutOfVocabulary) {
    const auto index = Bm25Index::build(kDocs);
    EXPECT_NEAR(tfidf_cosine(index, kDocs[1].second, kDocs[1].second), 1.0, 1e-12);
    EXPECT_EQ(tfidf_cosine(index, "zzz qqq", kDocs[1].second), 0.0);
    EXPECT_EQ(tfidf_cosine(index, "", ""), 0.0);
}

TEST(Tfidf, WeightsUseLogTf) {
    const auto index = Bm25Index::build({{"a", "xx yy"}, {"b", "yy"}});
    const auto v = tfidf_vector(index, "xx xx yy");
    EXPECT_NEAR(v.at("xx"), std::log(3.0) * std::log(3.0), 1e-15);
    EXPECT_NEAR(v.at("yy"), std::log(2.0) * std::log(2.0), 1e-15);
}
