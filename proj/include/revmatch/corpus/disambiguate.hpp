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
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "revmatch/clients/verifier.hpp"
#include "revmatch/corpus/types.hpp"
#include "revmatch/text.hpp"

namespace revmatch::corpus {

struct DisambiguationResult {
    std::vector<Author> authors;  // sorted by author_id
    std::size_t verifier_calls = 0;
    std::size_t verifier_merges = 0;
    std::size_t verifier_skips = 0;  // pairs left distinct because the verifier was unavailable
};

namespace detail {

class MentionUnion {
  public:
    explicit MentionUnion(const std::vector<const AuthorMention*>& mentions)
        : parent_(mentions.size()), email_(mentions.size()) {
        std::iota(parent_.begin(), parent_.end(), 0);
        for (std::size_t i = 0; i < mentions.size(); ++i) email_[i] = mentions[i]->email;
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    /// Two groups may join unless each already carries a different email.
    bool compatible(std::size_t a, std::size_t b) {
        const auto& ea = email_[find(a)];
        const auto& eb = email_[find(b)];
        return ea.empty() || eb.empty() || ea == eb;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b || !compatible(a, b)) return false;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        if (email_[a].empty()) email_[a] = email_[b];
        return true;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::string> email_;
};

}  // namespace detail

/// Precision-oriented hierarchical identity resolution over author mentions.
///
/// Tiers, applied in order with union-find semantics:
///   1. identical non-empty email;
///   2. identical case-folded name and identical non-empty affiliation;
///   3. identical case-folded name, differing non-empty affiliations, and a
///      positive verdict from `verifier`.
/// A merge that would put two different non-empty emails in one group is
/// never made. Mentions with neither email nor affiliation stay singletons.
/// Pairs are visited in mention-id order, so the partition does not depend
/// on the order of `mentions`.
inline DisambiguationResult disambiguate_authors(const std::vector<AuthorMention>& mentions,
                                                 clients::SemanticVerifier& verifier,
                                                 std::ostream* log = nullptr) {
    std::vector<const AuthorMention*> sorted;
    sorted.reserve(mentions.size());
    for (const auto& m : mentions) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->mention_id < b->mention_id; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->mention_id == sorted[i - 1]->mention_id) {
            throw DataError("duplicate mention id " + sorted[i]->mention_id);
        }
    }

    detail::MentionUnion groups(sorted);
    DisambiguationResult result;

    std::map<std::string, std::vector<std::size_t>> by_email;
    std::map<std::string, std::vector<std::size_t>> by_name;  // only mentions with an affiliation
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!sorted[i]->email.empty()) by_email[sorted[i]->email].push_back(i);
        if (!sorted[i]->affiliation.empty()) by_name[text::to_lower(sorted[i]->name)].push_back(i);
    }

    for (const auto& [_, ids] : by_email) {
        for (std::size_t k = 1; k < ids.size(); ++k) groups.unite(ids.front(), ids[k]);
    }

    for (const auto& [_, ids] : by_name) {
        for (std::size_t x = 0; x < ids.size(); ++x) {
            for (std::size_t y = x + 1; y < ids.size(); ++y) {
                if (text::to_lower(sorted[ids[x]]->affiliation) == text::to_lower(sorted[ids[y]]->affiliation)) {
                    groups.unite(ids[x], ids[y]);
                }
            }
        }
    }

    for (const auto& [_, ids] : by_name) {
        for (std::size_t x = 0; x < ids.size(); ++x) {
            for (std::size_t y = x + 1; y < ids.size(); ++y) {
                const auto a = ids[x];
                const auto b = ids[y];
                if (groups.find(a) == groups.find(b) || !groups.compatible(a, b)) continue;
                ++result.verifier_calls;
                try {
                    if (verifier.verify(*sorted[a], *sorted[b]) == clients::Verdict::Merge) {
                        groups.unite(a, b);
                        ++result.verifier_merges;
                    }
                } catch (const clients::VerifierUnavailable& e) {
                    ++result.verifier_skips;
                    if (log != nullptr) {
                        *log << "disambiguate: verifier unavailable for " << sorted[a]->mention_id << " / "
                             << sorted[b]->mention_id << ", keeping distinct: " << e.what() << "\n";
                    }
                }
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < sorted.size(); ++i) members[groups.find(i)].push_back(i);

    for (const auto& [root, ids] : members) {
        Author author;
        // Members are in mention-id order, so the root is the smallest id.
        author.author_id = "author:" + sorted[ids.front()]->mention_id;
        std::map<std::string, int> name_counts;
        for (auto i : ids) {
            author.mention_ids.insert(sorted[i]->mention_id);
            author.paper_ids.insert(sorted[i]->paper_id);
            ++name_counts[sorted[i]->name];
        }
        int best = 0;
        for (const auto& [name, count] : name_counts) {
            if (count > best) {
                best = count;
                author.canonical_name = name;
            }
        }
        result.authors.push_back(std::move(author));
    }
    std::sort(result.authors.begin(), result.authors.end(),
              [](const Author& a, const Author& b) { return a.author_id < b.author_id; });
    return result;
}

}  // namespace revmatch::corpus
