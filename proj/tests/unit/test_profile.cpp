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

#include "revmatch/profile/profile.hpp"
#include "support/builders.hpp"

using namespace revmatch;
using namespace revmatch::profile;
using revmatch::testing::make_corpus;

namespace {

/// Returns scripted keywords per title and counts calls.
class ScriptedKeywords : public clients::KeywordClient {
  public:
    std::map<std::string, std::vector<std::string>> replies;
    int calls = 0;
    clients::KeywordResponse extract(const clients::KeywordRequest& req) override {
        ++calls;
        const auto it = replies.find(req.title);
        if (it == replies.end()) throw ContractError("no reply scripted");
        return {it->second};
    }
};

DateWindow window(const char* end) { return DateWindow::two_years_ending(*Date::parse(end)); }

}  // namespace

TEST(KeywordBag, CountsAndOrdersByFrequency) {
    KeywordBag bag;
    bag.add("Graph Learning", "p1");
    bag.add("retrieval", "p1");
    bag.add(" graph learning ", "p2");
    bag.add("", "p2");
    EXPECT_EQ(bag.count("graph learning"), 2);
    EXPECT_EQ(bag.total(), 3u);
    const auto e = bag.entries();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0], (KeywordBag::Entry{"graph learning", 2}));
    EXPECT_EQ(bag.provenance().at("graph learning"), (std::set<std::string>{"p1", "p2"}));
}

TEST(Linearize, PrefixAndRepetition) {
    KeywordBag bag;
    bag.add("b", "p");
    bag.add("a", "p");
    bag.add("b", "q");
    EXPECT_EQ(linearize(bag), "The reviewer’s research keywords include: b, b, a");
}

TEST(Linearize, TruncatesFromTheTail) {
    KeywordBag bag;
    for (int i = 0; i < 3; ++i) bag.add("x", "p" + std::to_string(i));
    bag.add("y", "p");
    bool truncated = false;
    EXPECT_EQ(linearize(bag, 2, &truncated), std::string(kProfilePrefix) + "x, x");
    EXPECT_TRUE(truncated);
    linearize(bag, 4, &truncated);
    EXPECT_FALSE(truncated);
}

TEST(Profile, TwoPapersSharingAKeyword) {
    const auto c = make_corpus({{"p1", "T1", "abs", "2024-03-01", {"A"}}, {"p2", "T2", "abs", "2023-06-01", {"A"}}});
    ScriptedKeywords kw;
    kw.replies = {{"T1", {"LLM", "retrieval"}}, {"T2", {"llm", "ranking"}}};
    const auto p = profile_reviewer(c.author("A"), c, kw, 5, window("2024-06-30"));
    EXPECT_EQ(kw.calls, 2);
    EXPECT_EQ(p.bag.count("llm"), 2);
    EXPECT_EQ(p.text, std::string(kProfilePrefix) + "llm, llm, ranking, retrieval");
    EXPECT_FALSE(p.truncated);
}

TEST(Profile, OnlyPapersInsideTheWindow) {
    const auto c = make_corpus({{"old", "Old", "abs", "2020-01-01", {"A"}},
                                {"edge", "Edge", "abs", "2022-06-30", {"A"}},
                                {"new", "New", "abs", "2024-06-30", {"A"}}});
    ScriptedKeywords kw;
    kw.replies = {{"Old", {"ancient"}}, {"Edge", {"boundary"}}, {"New", {"fresh"}}};
    const auto p = profile_reviewer(c.author("A"), c, kw, 5, window("2024-06-30"));
    EXPECT_EQ(kw.calls, 2);
    EXPECT_EQ(p.bag.count("ancient"), 0);
    EXPECT_EQ(p.bag.count("boundary"), 1);
}

TEST(Profile, EmptyWindowIsColdStart) {
    const auto c = make_corpus({{"old", "Old", "abs", "2019-01-01", {"A"}}});
    ScriptedKeywords kw;
    EXPECT_THROW(profile_reviewer(c.author("A"), c, kw, 5, window("2024-06-30")), ColdStartError);
    EXPECT_EQ(kw.calls, 0);
}

TEST(Profile, ContractErrorNamesThePaper) {
    const auto c = make_corpus({{"p9", "Unscripted", "abs", "2024-01-01", {"A"}}});
    ScriptedKeywords kw;
    try {
        profile_reviewer(c.author("A"), c, kw, 5, window("2024-06-30"));
        FAIL();
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find("p9"), std::string::npos);
    }
}

TEST(Profile, StubExtractorEndToEnd) {
    const auto c = make_corpus({{"p1", "Graph retrieval", "graph ranking models", "2024-01-01", {"A"}}});
    clients::StubKeywordClient kw;
    const auto p = profile_reviewer(c.author("A"), c, kw, 2, window("2024-06-30"));
    EXPECT_EQ(p.text, std::string(kProfilePrefix) + "graph, models");
}

TEST(Profile, JsonRoundTrip) {
    const auto c = make_corpus({{"p1", "T1", "abs", "2024-03-01", {"A"}}});
    ScriptedKeywords kw;
    kw.replies = {{"T1", {"b", "a", "b"}}};
    const auto p = profile_reviewer(c.author("A"), c, kw, 5, window("2024-06-30"));
    const auto back = profile_from_json(nlohmann::json::parse(to_json(p).dump()));
    EXPECT_EQ(back.author_id, "A");
    EXPECT_EQ(back.text, p.text);
    EXPECT_EQ(back.bag.entries(), p.bag.entries());
    EXPECT_EQ(back.window.start.str(), "2022-06-30");
    auto bad = to_json(p);
    bad["entries"][0][1] = 0;
    EXPECT_THROW(profile_from_json(bad), DataError);
}
