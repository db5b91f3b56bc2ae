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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revmatch/corpus/corpus.hpp"
#include "revmatch/dense/pooling.hpp"
#include "revmatch/dense/store.hpp"
#include "revmatch/error.hpp"
#include "revmatch/lexical/bm25.hpp"
#include "revmatch/lexical/tfidf.hpp"
#include "revmatch/profile/profile.hpp"
#include "revmatch/text.hpp"
#include "revmatch/train/adapter.hpp"

namespace revmatch::cli {

/// Relevance of a reviewer for a paper. nullopt when the scorer has nothing to
/// go on for this reviewer (no profile, no embedded publications).
class Scorer {
  public:
    virtual ~Scorer() = default;
    virtual std::optional<double> score(const std::string& paper_id, const std::string& author_id) const = 0;
};

/// Everything a scorer may need, loaded once per command.
struct ScoringContext {
    const corpus::Corpus* corpus = nullptr;
    std::map<std::string, profile::ReviewerProfile> profiles;
    std::optional<lexical::Bm25Index> profile_index;
    std::optional<dense::EmbeddingStore> paper_vectors;
    std::optional<dense::EmbeddingStore> profile_vectors;
    std::optional<train::AdapterModel> model;
};

class AdapterScorer : public Scorer {
  public:
    explicit AdapterScorer(const ScoringContext& ctx) : ctx_(ctx) {
        if (!ctx_.model || !ctx_.paper_vectors || !ctx_.profile_vectors) {
            throw UsageError("adapter scorer needs a model and both embedding stores");
        }
    }

    std::optional<double> score(const std::string& paper_id, const std::string& author_id) const override {
        if (!ctx_.profile_vectors->contains(author_id)) return std::nullopt;
        return train::score(*ctx_.model, ctx_.paper_vectors->vector(paper_id), ctx_.profile_vectors->vector(author_id));
    }

  private:
    const ScoringContext& ctx_;
};

class Bm25Scorer : public Scorer {
  public:
    explicit Bm25Scorer(const ScoringContext& ctx) : ctx_(ctx) {
        if (!ctx_.profile_index) throw UsageError("bm25 scorer needs the profile index");
    }

    std::optional<double> score(const std::string& paper_id, const std::string& author_id) const override {
        if (!ctx_.profile_index->contains(author_id)) return std::nullopt;
        auto it = cache_.find(paper_id);
        if (it == cache_.end()) it = cache_.emplace(paper_id, text::tokenize(ctx_.corpus->paper(paper_id).text())).first;
        return ctx_.profile_index->score(it->second, author_id);
    }

  private:
    const ScoringContext& ctx_;
    mutable std::map<std::string, std::vector<std::string>> cache_;
};

/// TF-IDF cosine between the paper text and the profile text; idf comes from
/// the profile index.
class TfidfScorer : public Scorer {
  public:
    explicit TfidfScorer(const ScoringContext& ctx) : ctx_(ctx) {
        if (!ctx_.profile_index) throw UsageError("tfidf scorer needs the profile index");
    }

    std::optional<double> score(const std::string& paper_id, const std::string& author_id) const override {
        const auto it = ctx_.profiles.find(author_id);
        if (it == ctx_.profiles.end()) return std::nullopt;
        return lexical::tfidf_cosine(*ctx_.profile_index, ctx_.corpus->paper(paper_id).text(), it->second.text);
    }

  private:
    const ScoringContext& ctx_;
};

/// Pooled cosine over the reviewer's other publications.
class PooledScorer : public Scorer {
  public:
    PooledScorer(const ScoringContext& ctx, dense::Pooling strategy) : ctx_(ctx), strategy_(strategy) {
        if (!ctx_.paper_vectors) throw UsageError("pooled scorer needs the paper embedding store");
    }

    std::optional<double> score(const std::string& paper_id, const std::string& author_id) const override {
        if (!ctx_.corpus->has_author(author_id)) return std::nullopt;
        std::vector<std::string> pubs;
        for (const auto& pid : ctx_.corpus->author(author_id).paper_ids) {
            if (pid != paper_id) pubs.push_back(pid);
        }
        try {
            return dense::baseline_reviewer_score(*ctx_.paper_vectors, paper_id, author_id, pubs, strategy_);
        } catch (const ColdStartError&) {
            return std::nullopt;
        }
    }

  private:
    const ScoringContext& ctx_;
    dense::Pooling strategy_;
};

struct ScorerNeeds {
    bool profile_index = false;
    bool paper_vectors = false;
    bool profile_vectors = false;
    bool model = false;
};

inline ScorerNeeds needs_of(std::string_view name) {
    if (name == "adapter") return {false, true, true, true};
    if (name == "bm25" || name == "tfidf") return {true, false, false, false};
    if (name.starts_with("pooled:")) return {false, true, false, false};
    throw UsageError("unknown scorer: " + std::string(name));
}

inline std::unique_ptr<Scorer> make_scorer(std::string_view name, const ScoringContext& ctx) {
    if (name == "adapter") return std::make_unique<AdapterScorer>(ctx);
    if (name == "bm25") return std::make_unique<Bm25Scorer>(ctx);
    if (name == "tfidf") return std::make_unique<TfidfScorer>(ctx);
    if (name.starts_with("pooled:")) {
        const auto strategy = dense::parse_pooling(name.substr(7));
        if (!strategy) throw UsageError("unknown pooling strategy in scorer " + std::string(name));
        return std::make_unique<PooledScorer>(ctx, *strategy);
    }
    throw UsageError("unknown scorer: " + std::string(name));
}

}  // namespace revmatch::cli
