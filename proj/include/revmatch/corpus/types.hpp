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

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revmatch/date.hpp"

namespace revmatch::corpus {

enum class Subarea { AI, CL, CV, IR, LG, OTHER };

inline std::string_view to_string(Subarea s) {
    switch (s) {
        case Subarea::AI: return "AI";
        case Subarea::CL: return "CL";
        case Subarea::CV: return "CV";
        case Subarea::IR: return "IR";
        case Subarea::LG: return "LG";
        case Subarea::OTHER: return "OTHER";
    }
    return "OTHER";
}

/// Accepts "AI" or arXiv-style "cs.AI" (any case); everything else is OTHER.
inline Subarea parse_subarea(std::string_view raw) {
    std::string s(raw);
    if (s.size() > 3 && (s.rfind("cs.", 0) == 0 || s.rfind("CS.", 0) == 0)) s = s.substr(3);
    for (auto& c : s) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    if (s == "AI") return Subarea::AI;
    if (s == "CL") return Subarea::CL;
    if (s == "CV") return Subarea::CV;
    if (s == "IR") return Subarea::IR;
    if (s == "LG") return Subarea::LG;
    return Subarea::OTHER;
}

struct Paper {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<std::string> author_mention_ids;
    std::string last_revised;  // ISO-8601 as ingested
    Subarea subarea = Subarea::OTHER;

    Date revised_date() const { return *Date::parse(last_revised); }

    /// Title and abstract joined by a single space.
    std::string text() const { return title + " " + abstract; }
};

struct AuthorMention {
    std::string mention_id;
    std::string name;
    std::string email;        // lowercased and trimmed; empty when absent
    std::string affiliation;  // whitespace-normalized; empty when absent
    std::string paper_id;
};

struct Author {
    std::string author_id;
    std::set<std::string> mention_ids;
    std::string canonical_name;
    std::set<std::string> paper_ids;
};

/// Symmetric, irreflexive co-authorship relation.
class CoauthorGraph {
  public:
    void add_node(const std::string& a) { adjacency_[a]; }

    /// No-op for a == b.
    void add_edge(const std::string& a, const std::string& b) {
        add_node(a);
        add_node(b);
        if (a == b) return;
        adjacency_[a].insert(b);
        adjacency_[b].insert(a);
    }

    bool has_node(const std::string& a) const { return adjacency_.count(a) != 0; }

    bool adjacent(const std::string& a, const std::string& b) const {
        const auto it = adjacency_.find(a);
        return it != adjacency_.end() && it->second.count(b) != 0;
    }

    const std::set<std::string>& neighbors(const std::string& a) const {
        static const std::set<std::string> empty;
        const auto it = adjacency_.find(a);
        return it == adjacency_.end() ? empty : it->second;
    }

    const std::map<std::string, std::set<std::string>>& adjacency() const { return adjacency_; }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& [_, nbrs] : adjacency_) n += nbrs.size();
        return n / 2;
    }

  private:
    std::map<std::string, std::set<std::string>> adjacency_;
};

}  // namespace revmatch::corpus
