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

#include "revmatch/date.hpp"
#include "revmatch/text.hpp"

using revmatch::Date;
using revmatch::DateWindow;
namespace text = revmatch::text;

using Tokens = std::vector<std::string>;

TEST(Tokenize, SplitsOnPunctuation) { EXPECT_EQ(text::tokenize("Graph-based RAG!"), (Tokens{"graph", "based", "rag"})); }

TEST(Tokenize, DropsShortTokens) { EXPECT_TRUE(text::tokenize("a I x").empty()); }

TEST(Tokenize, FoldsAccentedCase) {
    EXPECT_EQ(text::tokenize("Rétrieval rétrieval"), (Tokens{"rétrieval", "rétrieval"}));
    EXPECT_EQ(text::tokenize("RÉTRIEVAL"), (Tokens{"rétrieval"}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(text::tokenize("").empty()); }

TEST(Tokenize, KeepsDigitsAndNonLatinScripts) {
    EXPECT_EQ(text::tokenize("BM25 scores, GPT4o"), (Tokens{"bm25", "scores", "gpt4o"}));
    // Simple 1:1 case mapping: capital sigma always folds to medial sigma.
    EXPECT_EQ(text::tokenize("ΓΡΑΦΟΣ граф"), (Tokens{"γραφοσ", "граф"}));
}

TEST(Tokenize, CurlyApostropheSplits) {
    EXPECT_EQ(text::tokenize("The reviewer’s research"), (Tokens{"the", "reviewer", "research"}));
}

TEST(Tokenize, LengthCountsCodePointsNotBytes) {
    // "é" is two bytes but one code point.
    EXPECT_TRUE(text::tokenize("é").empty());
    EXPECT_EQ(text::tokenize("éé"), (Tokens{"éé"}));
}

TEST(Tokenize, InvalidUtf8DoesNotCrash) {
    const std::string bad = "ab\xff\xfe" "cd \xc3";
    const auto t = text::tokenize(bad);
    EXPECT_FALSE(t.empty());
}

TEST(Tokenize, Idempotent) {
    const std::string s = "Ünïcode Façade, x-ray; ΣΊΣΥΦΟΣ";
    const auto once = text::tokenize(s);
    EXPECT_EQ(text::tokenize(text::join(once, " ")), once);
}

TEST(Whitespace, TrimAndNormalize) {
    EXPECT_EQ(text::trim("  a b \t\n"), "a b");
    EXPECT_EQ(text::normalize_whitespace("  Dept.\t of  CS \n"), "Dept. of CS");
    EXPECT_EQ(text::normalize_whitespace(""), "");
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(text::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(text::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(text::fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(DateParse, AcceptsIsoPrefixes) {
    ASSERT_TRUE(Date::parse("2024-02-29"));
    EXPECT_EQ(Date::parse("2025-02-02T10:00:00Z")->str(), "2025-02-02");
    EXPECT_FALSE(Date::parse("2023-02-29"));
    EXPECT_FALSE(Date::parse("2024/01/01"));
    EXPECT_FALSE(Date::parse("24-01-01"));
}

TEST(DateWindow, TwoYearsInclusive) {
    const auto w = DateWindow::two_years_ending(*Date::parse("2024-02-29"));
    EXPECT_EQ(w.start.str(), "2022-02-28");
    EXPECT_TRUE(w.contains(*Date::parse("2022-02-28")));
    EXPECT_TRUE(w.contains(*Date::parse("2024-02-29")));
    EXPECT_FALSE(w.contains(*Date::parse("2022-02-27")));
    EXPECT_FALSE(w.contains(*Date::parse("2024-03-01")));
}
