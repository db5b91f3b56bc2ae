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
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::lexical {

using text::tokenize;

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::size_t doc = 0;  // dense document index
    int tf = 0;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Okapi BM25 over an in-memory inverted index.
///
///   idf(t)   = ln(1 + (N - df + 0.5) / (df + 0.5))
///   score(d) = sum over query tokens t of
///              idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
///
/// Query tokens are summed with multiplicity. The +1 inside the log keeps idf
/// positive, so every score is >= 0.
class Bm25Index {
  public:
    static constexpr int kFormatVersion = 1;

    Bm25Index() = default;

    /// Builds from (doc id, text) pairs; ids must be unique.
    static Bm25Index build(const std::vector<std::pair<std::string, std::string>>& docs, Bm25Params params = {}) {
        std::vector<std::pair<std::string, std::vector<std::string>>> tokenized;
        tokenized.reserve(docs.size());
        for (const auto& [id, body] : docs) tokenized.emplace_back(id, tokenize(body));
        return build_tokenized(tokenized, params);
    }

    static Bm25Index build_tokenized(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                                     Bm25Params params = {}) {
        Bm25Index index;
        index.params_ = params;
        for (const auto& [id, tokens] : docs) {
            std::map<std::string, int> tf;
            for (const auto& t : tokens) ++tf[t];
            index.add_document(id, tokens.size(), tf);
        }
        index.finish();
        return index;
    }

    double score(const std::vector<std::string>& query_tokens, const std::string& doc_id) const {
        return score_doc(query_tokens, doc_slot(doc_id));
    }

    /// Candidates ordered by descending score, ties by ascending id.
    std::vector<ScoredDoc> rank(const std::vector<std::string>& query_tokens,
                                const std::vector<std::string>& candidate_ids) const {
        std::vector<ScoredDoc> out;
        out.reserve(candidate_ids.size());
        for (const auto& id : candidate_ids) out.push_back({id, score_doc(query_tokens, doc_slot(id))});
        std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.doc_id < b.doc_id;
        });
        return out;
    }

    double idf(const std::string& term) const {
        return bm25_idf(static_cast<double>(doc_count()), static_cast<double>(document_frequency(term)));
    }

    static double bm25_idf(double n_docs, double df) { return std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5)); }

    std::size_t document_frequency(const std::string& term) const {
        const auto it = postings_.find(term);
        return it == postings_.end() ? 0 : it->second.size();
    }

    bool contains(const std::string& doc_id) const { return slot_.count(doc_id) != 0; }
    bool in_vocabulary(const std::string& term) const { return postings_.count(term) != 0; }
    std::size_t doc_count() const { return doc_ids_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    std::size_t doc_length(const std::string& doc_id) const { return doc_lengths_[doc_slot(doc_id)]; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const Bm25Params& params() const { return params_; }

    /// Term frequencies of a document, reconstructed from the postings.
    std::map<std::string, int> term_frequencies(const std::string& doc_id) const {
        const auto slot = doc_slot(doc_id);
        std::map<std::string, int> tf;
        for (const auto& [term, list] : postings_) {
            const auto it = std::lower_bound(list.begin(), list.end(), slot,
                                             [](const Posting& p, std::size_t s) { return p.doc < s; });
            if (it != list.end() && it->doc == slot) tf[term] = it->tf;
        }
        return tf;
    }

    /// Versioned JSON form: document ids, lengths, and term frequencies.
    nlohmann::json to_json() const {
        std::vector<std::map<std::string, int>> per_doc(doc_ids_.size());
        for (const auto& [term, list] : postings_) {
            for (const auto& p : list) per_doc[p.doc][term] = p.tf;
        }
        nlohmann::json docs = nlohmann::json::array();
        for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
            docs.push_back({{"id", doc_ids_[i]}, {"length", doc_lengths_[i]}, {"terms", per_doc[i]}});
        }
        return {{"format", "revmatch-bm25"},
                {"version", kFormatVersion},
                {"k1", params_.k1},
                {"b", params_.b},
                {"docs", docs}};
    }

    static Bm25Index from_json(const nlohmann::json& j) {
        if (j.value("format", "") != "revmatch-bm25") throw DataError("not a BM25 index file");
        if (j.value("version", 0) != kFormatVersion) {
            throw DataError("unsupported BM25 index version " + std::to_string(j.value("version", 0)));
        }
        Bm25Index index;
        index.params_ = {j.at("k1").get<double>(), j.at("b").get<double>()};
        for (const auto& d : j.at("docs")) {
            index.add_document(d.at("id").get<std::string>(), d.at("length").get<std::size_t>(),
                               d.at("terms").get<std::map<std::string, int>>());
        }
        index.finish();
        return index;
    }

  private:
    void add_document(const std::string& id, std::size_t length, const std::map<std::string, int>& tf) {
        const std::size_t slot = doc_ids_.size();
        if (!slot_.emplace(id, slot).second) throw DataError("duplicate document id " + id);
        doc_ids_.push_back(id);
        doc_lengths_.push_back(length);
        for (const auto& [term, count] : tf) {
            if (count < 1) throw DataError("term frequency must be >= 1 in " + id);
            postings_[term].push_back({slot, count});
        }
    }

    void finish() {
        double total = 0.0;
        for (auto len : doc_lengths_) total += static_cast<double>(len);
        avg_doc_length_ = doc_lengths_.empty() ? 0.0 : total / static_cast<double>(doc_lengths_.size());
    }

    std::size_t doc_slot(const std::string& doc_id) const {
        const auto it = slot_.find(doc_id);
        if (it == slot_.end()) throw LookupError("document " + doc_id);
        return it->second;
    }

    double score_doc(const std::vector<std::string>& query_tokens, std::size_t slot) const {
        const double n = static_cast<double>(doc_count());
        const double norm = avg_doc_length_ > 0.0
                                ? 1.0 - params_.b + params_.b * static_cast<double>(doc_lengths_[slot]) / avg_doc_length_
                                : 1.0;
        double total = 0.0;
        for (const auto& t : query_tokens) {
            const auto it = postings_.find(t);
            if (it == postings_.end()) continue;
            const auto& list = it->second;
            const auto p = std::lower_bound(list.begin(), list.end(), slot,
                                            [](const Posting& x, std::size_t s) { return x.doc < s; });
            if (p == list.end() || p->doc != slot) continue;
            const double tf = static_cast<double>(p->tf);
            const double idf = bm25_idf(n, static_cast<double>(list.size()));
            total += idf * tf * (params_.k1 + 1.0) / (tf + params_.k1 * norm);
        }
        return total;
    }

    Bm25Params params_;
    std::vector<std::string> doc_ids_;
    std::vector<std::size_t> doc_lengths_;
    std::unordered_map<std::string, std::size_t> slot_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;  // ascending doc slot
    double avg_doc_length_ = 0.0;
};

}  // namespace revmatch::lexical
