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

#include "revmatch/corpus/corpus.hpp"
#include "revmatch/dense/store.hpp"
#include "revmatch/error.hpp"

namespace revmatch::coi {

struct CandidatePool {
    std::string query_paper_id;
    std::set<std::string> candidates;
    std::map<std::string, std::set<std::string>> provenance;  // author -> recalled papers
};

/// True when `candidate` is one of `query_authors` or a direct co-author of one.
inline bool conflicted(const std::string& candidate, const std::set<std::string>& query_authors,
                       const corpus::CoauthorGraph& graph) {
    if (query_authors.count(candidate) != 0) return true;
    for (const auto& a : query_authors) {
        if (graph.adjacent(a, candidate)) return true;
    }
    return false;
}

/// Drops query authors and their 1-hop co-authors. Pure; the input is untouched.
inline CandidatePool coi_filter(const CandidatePool& pool, const std::set<std::string>& query_authors,
                                const corpus::CoauthorGraph& graph) {
    if (query_authors.empty()) {
        throw DataError("paper " + pool.query_paper_id + " has no authors; cannot apply conflict-of-interest rules");
    }
    CandidatePool out;
    out.query_paper_id = pool.query_paper_id;
    for (const auto& c : pool.candidates) {
        if (conflicted(c, query_authors, graph)) continue;
        out.candidates.insert(c);
        const auto it = pool.provenance.find(c);
        if (it != pool.provenance.end()) out.provenance.emplace(c, it->second);
    }
    return out;
}

/// Dense threshold recall: authors of every other paper whose cosine with
/// the query paper is strictly above `threshold`.
inline CandidatePool recall_candidates(const corpus::Corpus& corpus, const dense::EmbeddingStore& papers,
                                       const std::string& query_paper_id, double threshold) {
    CandidatePool pool;
    pool.query_paper_id = query_paper_id;
    for (const auto& pid : papers.threshold_recall(papers.vector(query_paper_id), threshold)) {
        if (pid == query_paper_id) continue;
        for (const auto& author : corpus.authors_of(pid)) {
            pool.candidates.insert(author);
            pool.provenance[author].insert(pid);
        }
    }
    return pool;
}

}  // namespace revmatch::coi
