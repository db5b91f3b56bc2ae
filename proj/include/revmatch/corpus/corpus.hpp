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
#include <vector>

#include "revmatch/corpus/types.hpp"
#include "revmatch/error.hpp"

namespace revmatch::corpus {

/// Maps every mention id to the author that owns it.
inline std::map<std::string, std::string> mention_owner(const std::vector<Author>& authors) {
    std::map<std::string, std::string> owner;
    for (const auto& a : authors) {
        for (const auto& m : a.mention_ids) {
            if (!owner.emplace(m, a.author_id).second) {
                throw DataError("mention " + m + " belongs to more than one author");
            }
        }
    }
    return owner;
}

/// Edge (a, b) iff a != b and some paper lists mentions of both. Every
/// author becomes a node, including those with no co-authors.
inline CoauthorGraph build_coauthor_graph(const std::vector<Author>& authors, const std::vector<Paper>& papers) {
    const auto owner = mention_owner(authors);
    CoauthorGraph graph;
    for (const auto& a : authors) graph.add_node(a.author_id);
    for (const auto& p : papers) {
        std::vector<std::string> ids;
        for (const auto& m : p.author_mention_ids) {
            const auto it = owner.find(m);
            if (it == owner.end()) throw DataError("dangling mention " + m + " in paper " + p.id);
            ids.push_back(it->second);
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) graph.add_edge(ids[i], ids[j]);
        }
    }
    return graph;
}

/// Immutable, fully resolved corpus with the lookups the pipeline needs.
class Corpus {
  public:
    Corpus(std::vector<Paper> papers, std::vector<Author> authors)
        : papers_(std::move(papers)), authors_(std::move(authors)) {
        for (std::size_t i = 0; i < papers_.size(); ++i) {
            if (!paper_index_.emplace(papers_[i].id, i).second) throw DataError("duplicate paper id " + papers_[i].id);
        }
        for (std::size_t i = 0; i < authors_.size(); ++i) {
            if (!author_index_.emplace(authors_[i].author_id, i).second) {
                throw DataError("duplicate author id " + authors_[i].author_id);
            }
        }
        graph_ = build_coauthor_graph(authors_, papers_);
        const auto owner = mention_owner(authors_);
        for (const auto& p : papers_) {
            auto& ids = paper_authors_[p.id];
            for (const auto& m : p.author_mention_ids) ids.insert(owner.at(m));
        }
        for (const auto& a : authors_) {
            for (const auto& pid : a.paper_ids) {
                if (paper_index_.count(pid) == 0) throw DataError("author " + a.author_id + " cites unknown paper " + pid);
            }
        }
    }

    const std::vector<Paper>& papers() const { return papers_; }
    const std::vector<Author>& authors() const { return authors_; }
    const CoauthorGraph& graph() const { return graph_; }

    const Paper& paper(const std::string& id) const {
        const auto it = paper_index_.find(id);
        if (it == paper_index_.end()) throw LookupError("paper " + id);
        return papers_[it->second];
    }

    bool has_paper(const std::string& id) const { return paper_index_.count(id) != 0; }

    const Author& author(const std::string& id) const {
        const auto it = author_index_.find(id);
        if (it == author_index_.end()) throw LookupError("author " + id);
        return authors_[it->second];
    }

    bool has_author(const std::string& id) const { return author_index_.count(id) != 0; }

    /// Resolved author ids of a paper.
    const std::set<std::string>& authors_of(const std::string& paper_id) const {
        const auto it = paper_authors_.find(paper_id);
        if (it == paper_authors_.end()) throw LookupError("paper " + paper_id);
        return it->second;
    }

    /// Latest last_revised date in the corpus; the default profiling reference.
    Date max_revised() const {
        if (papers_.empty()) throw DataError("empty corpus has no reference date");
        Date best = papers_.front().revised_date();
        for (const auto& p : papers_) best = std::max(best, p.revised_date());
        return best;
    }

  private:
    std::vector<Paper> papers_;
    std::vector<Author> authors_;
    CoauthorGraph graph_;
    std::map<std::string, std::size_t> paper_index_;
    std::map<std::string, std::size_t> author_index_;
    std::map<std::string, std::set<std::string>> paper_authors_;
};

}  // namespace revmatch::corpus
