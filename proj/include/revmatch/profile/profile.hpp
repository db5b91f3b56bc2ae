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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "revmatch/clients/keywords.hpp"
#include "revmatch/corpus/corpus.hpp"
#include "revmatch/date.hpp"
#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::profile {

/// Fixed lead-in of every linearized profile (note the U+2019 apostrophe).
inline constexpr std::string_view kProfilePrefix = "The reviewer’s research keywords include: ";

/// Upper bound on keyword occurrences in the linearized text.
inline constexpr std::size_t kMaxProfileKeywords = 512;

inline constexpr int kDefaultKeywordsPerPaper = 5;

/// Frequency-preserving keyword multiset. Entries are kept ordered by
/// descending count, then keyword.
class KeywordBag {
  public:
    struct Entry {
        std::string keyword;
        int count = 0;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    /// Adds one occurrence (case-folded and trimmed) credited to `paper_id`.
    void add(std::string_view keyword, const std::string& paper_id) {
        auto key = text::to_lower(text::trim(keyword));
        if (key.empty()) return;
        ++counts_[key];
        provenance_[key].insert(paper_id);
        ++total_;
    }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(counts_.size());
        for (const auto& [k, c] : counts_) out.push_back({k, c});
        std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.count > b.count; });
        return out;
    }

    int count(const std::string& keyword) const {
        const auto it = counts_.find(keyword);
        return it == counts_.end() ? 0 : it->second;
    }

    const std::map<std::string, std::set<std::string>>& provenance() const { return provenance_; }
    std::size_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

    /// Replaces the bag with explicit counts (used when loading persisted profiles).
    static KeywordBag from_entries(const std::vector<Entry>& entries) {
        KeywordBag bag;
        for (const auto& e : entries) {
            if (e.count < 1) throw DataError("keyword count must be >= 1 for " + e.keyword);
            bag.counts_[e.keyword] += e.count;
            bag.total_ += static_cast<std::size_t>(e.count);
        }
        return bag;
    }

  private:
    std::map<std::string, int> counts_;
    std::map<std::string, std::set<std::string>> provenance_;
    std::size_t total_ = 0;
};

struct ReviewerProfile {
    std::string author_id;
    KeywordBag bag;
    std::string text;
    DateWindow window;
    bool truncated = false;  // the expansion exceeded kMaxProfileKeywords
};

/// Prefix + every keyword repeated `count` times, most frequent first,
/// comma-separated. The expansion is cut to `cap` occurrences from the tail.
inline std::string linearize(const KeywordBag& bag, std::size_t cap = kMaxProfileKeywords, bool* truncated = nullptr) {
    std::vector<std::string> expansion;
    for (const auto& e : bag.entries()) {
        for (int i = 0; i < e.count; ++i) expansion.push_back(e.keyword);
    }
    if (truncated != nullptr) *truncated = expansion.size() > cap;
    if (expansion.size() > cap) expansion.resize(cap);
    return std::string(kProfilePrefix) + text::join(expansion, ", ");
}

/// Papers of `author` whose last revision falls inside `window`, by id.
inline std::vector<const corpus::Paper*> papers_in_window(const corpus::Author& author, const corpus::Corpus& corpus,
                                                          const DateWindow& window) {
    std::vector<const corpus::Paper*> out;
    for (const auto& pid : author.paper_ids) {
        const auto& p = corpus.paper(pid);
        if (window.contains(p.revised_date())) out.push_back(&p);
    }
    return out;
}

/// Builds the keyword profile of one reviewer from the papers inside `window`.
/// One extraction call per paper; throws ColdStartError when the window holds
/// no papers and rethrows client contract errors with the paper id attached.
inline ReviewerProfile profile_reviewer(const corpus::Author& author, const corpus::Corpus& corpus,
                                        clients::KeywordClient& keywords, int n_keywords, const DateWindow& window) {
    if (n_keywords <= 0) throw UsageError("n_keywords must be positive");
    const auto papers = papers_in_window(author, corpus, window);
    if (papers.empty()) {
        throw ColdStartError(author.author_id, "no papers between " + window.start.str() + " and " + window.end.str());
    }
    ReviewerProfile profile;
    profile.author_id = author.author_id;
    profile.window = window;
    for (const auto* p : papers) {
        clients::KeywordResponse resp;
        try {
            resp = keywords.extract({p->title, p->abstract, n_keywords});
        } catch (const ContractError& e) {
            throw ContractError("paper " + p->id + ": " + e.what());
        }
        for (const auto& kw : resp.keywords) profile.bag.add(kw, p->id);
    }
    profile.text = linearize(profile.bag, kMaxProfileKeywords, &profile.truncated);
    return profile;
}

inline nlohmann::json to_json(const ReviewerProfile& p) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : p.bag.entries()) entries.push_back({e.keyword, e.count});
    return {{"author_id", p.author_id},
            {"entries", entries},
            {"text", p.text},
            {"window", {p.window.start.str(), p.window.end.str()}}};
}

inline ReviewerProfile profile_from_json(const nlohmann::json& j) {
    ReviewerProfile p;
    p.author_id = j.at("author_id").get<std::string>();
    std::vector<KeywordBag::Entry> entries;
    for (const auto& e : j.at("entries")) {
        entries.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
    }
    p.bag = KeywordBag::from_entries(entries);
    p.text = j.at("text").get<std::string>();
    const auto start = Date::parse(j.at("window").at(0).get<std::string>());
    const auto end = Date::parse(j.at("window").at(1).get<std::string>());
    if (!start || !end) throw DataError("profile " + p.author_id + ": bad window");
    p.window = {*start, *end};
    p.truncated = p.bag.total() > kMaxProfileKeywords;
    return p;
}

}  // namespace revmatch::profile
