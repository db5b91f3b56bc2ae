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
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revmatch/cli/config.hpp"
#include "revmatch/cli/scoring.hpp"
#include "revmatch/clients/embedding.hpp"
#include "revmatch/clients/httplib_transport.hpp"
#include "revmatch/clients/keywords.hpp"
#include "revmatch/clients/verifier.hpp"
#include "revmatch/coi/coi.hpp"
#include "revmatch/corpus/corpus.hpp"
#include "revmatch/corpus/disambiguate.hpp"
#include "revmatch/corpus/ingest.hpp"
#include "revmatch/date.hpp"
#include "revmatch/dense/store.hpp"
#include "revmatch/error.hpp"
#include "revmatch/eval/benchmark.hpp"
#include "revmatch/eval/report.hpp"
#include "revmatch/jsonl.hpp"
#include "revmatch/lexical/bm25.hpp"
#include "revmatch/prefgen/triplets.hpp"
#include "revmatch/profile/profile.hpp"
#include "revmatch/random.hpp"
#include "revmatch/train/adapter.hpp"
#include "revmatch/train/grad_check.hpp"
#include "revmatch/train/loss.hpp"
#include "revmatch/train/trainer.hpp"

namespace revmatch::cli {

namespace fs = std::filesystem;

/// Per-invocation state: effective config, output streams, command name.
class Session {
  public:
    Session(PipelineConfig config, std::string command, std::ostream& out, std::ostream& err)
        : config_(std::move(config)), command_(std::move(command)), out_(out), err_(err) {}

    const PipelineConfig& config() const { return config_; }
    const std::string& command() const { return command_; }

    void log(const std::string& msg) const { err_ << "revmatch " << command_ << ": " << msg << '\n'; }

    /// The one machine-readable stdout line of a command.
    void summary(json fields) const {
        json line = {{"command", command_}};
        line.update(fields);
        out_ << line.dump() << '\n';
    }

    json header() const { return {{"command", command_}, {"config", effective_config(config_)}}; }

  private:
    PipelineConfig config_;
    std::string command_;
    std::ostream& out_;
    std::ostream& err_;
};

inline void require_file(const fs::path& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw UsageError(what + " not found: " + path.string());
}

inline std::string paper_key(const std::string& id) { return "p|" + id; }
inline std::string reviewer_key(const std::string& id) { return "r|" + id; }

// ---------------------------------------------------------------- clients

inline clients::ServiceConfig service_config() { return clients::ServiceConfig::from_env(); }

inline std::unique_ptr<clients::KeywordClient> make_keyword_client(const PipelineConfig& c) {
    if (c.backend == "stub") return std::make_unique<clients::StubKeywordClient>();
    const auto svc = service_config();
    if (svc.keyword_url.empty()) throw UsageError("REVMATCH_KEYWORD_URL is not set");
    std::string tmpl(clients::kKeywordPromptTemplate);
    if (!c.prompt.empty()) tmpl = io::read_file(c.prompt);
    return std::make_unique<clients::HttpKeywordClient>(std::make_shared<clients::HttplibTransport>(svc.timeout), svc,
                                                        std::move(tmpl));
}

inline std::unique_ptr<clients::EmbeddingClient> make_embedding_client(const PipelineConfig& c) {
    if (c.backend == "stub") return std::make_unique<clients::StubEmbeddingClient>(c.dim);
    const auto svc = service_config();
    if (svc.embedding_url.empty()) throw UsageError("REVMATCH_EMBEDDING_URL is not set");
    return std::make_unique<clients::HttpEmbeddingClient>(std::make_shared<clients::HttplibTransport>(svc.timeout),
                                                          svc, c.dim);
}

inline std::unique_ptr<clients::SemanticVerifier> make_verifier(const PipelineConfig& c) {
    if (c.backend == "stub") return std::make_unique<clients::StubVerifier>();
    const auto svc = service_config();
    if (svc.verifier_url.empty()) throw UsageError("REVMATCH_VERIFIER_URL is not set");
    return std::make_unique<clients::HttpVerifier>(std::make_shared<clients::HttplibTransport>(svc.timeout), svc);
}

// ---------------------------------------------------------------- loaders

template <typename T, typename F>
std::vector<T> load_rows(const fs::path& path, F&& parse) {
    std::vector<T> out;
    std::size_t row = 0;
    for (const auto& j : io::read_records(path)) {
        ++row;
        try {
            out.push_back(parse(j));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + " row " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

inline corpus::Corpus load_corpus(const PipelineConfig& c) {
    auto papers = load_rows<corpus::Paper>(c.papers_path(), corpus::paper_from_json);
    auto authors = load_rows<corpus::Author>(c.authors_path(), corpus::author_from_json);
    return corpus::Corpus(std::move(papers), std::move(authors));
}

inline std::vector<profile::ReviewerProfile> load_profiles(const fs::path& path) {
    return load_rows<profile::ReviewerProfile>(path, profile::profile_from_json);
}

inline lexical::Bm25Index load_bm25(const fs::path& path) {
    try {
        return lexical::Bm25Index::from_json(json::parse(io::read_file(path)));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

inline dense::EmbeddingStore load_store(const fs::path& path) {
    return dense::EmbeddingStore::deserialize(io::read_file(path));
}

inline std::vector<prefgen::PreferenceTriplet> load_triplets(const fs::path& path) {
    try {
        return load_rows<prefgen::PreferenceTriplet>(path, prefgen::triplet_from_json);
    } catch (const UsageError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

inline std::set<std::string> load_holdout(const PipelineConfig& c) {
    std::set<std::string> ids;
    if (!c.holdout.empty()) {
        for (const auto& line : io::read_lines(c.holdout)) ids.insert(text::trim(line));
    }
    if (!c.benchmark.empty()) {
        for (const auto& j : io::read_records(c.benchmark)) {
            if (j.contains("paper_id") && j["paper_id"].is_string()) ids.insert(j["paper_id"].get<std::string>());
        }
    }
    return ids;
}

/// Embedding table keyed by role-prefixed ids, covering both stores.
inline train::EmbeddingTable embedding_table(const dense::EmbeddingStore& papers, const dense::EmbeddingStore& profiles) {
    if (papers.dim() != profiles.dim()) throw DimensionMismatch(papers.dim(), profiles.dim());
    train::EmbeddingTable table;
    for (const auto& id : papers.ids()) {
        const auto v = papers.vector(id);
        table.emplace(paper_key(id), std::vector<double>(v.begin(), v.end()));
    }
    for (const auto& id : profiles.ids()) {
        const auto v = profiles.vector(id);
        table.emplace(reviewer_key(id), std::vector<double>(v.begin(), v.end()));
    }
    return table;
}

inline train::KeyedTriplet keyed(const prefgen::PreferenceTriplet& t) {
    if (t.view == prefgen::View::PaperCentric) {
        return {paper_key(t.anchor_id), reviewer_key(t.positive_id), reviewer_key(t.negative_id)};
    }
    return {reviewer_key(t.anchor_id), paper_key(t.positive_id), paper_key(t.negative_id)};
}

inline std::vector<std::vector<double>> embed_all(clients::EmbeddingClient& client, const std::vector<std::string>& texts,
                                                  const char* instruction) {
    constexpr std::size_t kChunk = 32;
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += kChunk) {
        clients::EmbeddingRequest req;
        req.task_instruction = instruction;
        req.texts.assign(texts.begin() + static_cast<std::ptrdiff_t>(start),
                         texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), start + kChunk)));
        auto resp = client.embed(req);
        for (auto& v : resp.vectors) out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------- commands

inline void cmd_ingest(const Session& s) {
    const auto& c = s.config();
    if (c.corpus.empty()) throw UsageError("--corpus is required");
    require_file(c.corpus, "corpus");
    const auto res = corpus::ingest_papers(io::read_lines(c.corpus));
    std::vector<json> papers, mentions, rejects;
    for (const auto& p : res.papers) papers.push_back(corpus::to_json(p));
    for (const auto& m : res.mentions) mentions.push_back(corpus::to_json(m));
    for (const auto& r : res.rejects) {
        rejects.push_back({{"line", r.line}, {"id", r.id}, {"reason", std::string(corpus::to_string(r.reason))}});
        s.log("rejected line " + std::to_string(r.line) + " (" + std::string(corpus::to_string(r.reason)) + ")");
    }
    io::write_file(c.papers_path(), io::to_jsonl_with_header(s.header(), papers));
    io::write_file(c.mentions_path(), io::to_jsonl_with_header(s.header(), mentions));
    io::write_file(c.rejects_path(), io::to_jsonl_with_header(s.header(), rejects));
    s.summary({{"papers", res.papers.size()},
               {"mentions", res.mentions.size()},
               {"rejects", res.rejects.size()},
               {"superseded", res.superseded}});
}

inline void cmd_disambiguate(const Session& s) {
    const auto& c = s.config();
    require_file(c.mentions_path(), "mentions (run ingest first)");
    const auto mentions = load_rows<corpus::AuthorMention>(c.mentions_path(), corpus::mention_from_json);
    auto verifier = make_verifier(c);
    std::ostringstream log;
    const auto res = corpus::disambiguate_authors(mentions, *verifier, &log);
    std::istringstream lines(log.str());
    for (std::string line; std::getline(lines, line);) s.log(line);
    std::vector<json> rows;
    for (const auto& a : res.authors) rows.push_back(corpus::to_json(a));
    io::write_file(c.authors_path(), io::to_jsonl_with_header(s.header(), rows));
    s.summary({{"mentions", mentions.size()},
               {"authors", res.authors.size()},
               {"verifier_calls", res.verifier_calls},
               {"verifier_merges", res.verifier_merges},
               {"verifier_skips", res.verifier_skips}});
}

inline void cmd_profile(const Session& s) {
    const auto& c = s.config();
    require_file(c.papers_path(), "papers (run ingest first)");
    require_file(c.authors_path(), "authors (run disambiguate first)");
    const auto corp = load_corpus(c);
    Date reference = corp.max_revised();
    if (!c.reference_date.empty()) {
        const auto d = Date::parse(c.reference_date);
        if (!d) throw UsageError("--reference_date is not an ISO date: " + c.reference_date);
        reference = *d;
    }
    const auto window = DateWindow::two_years_ending(reference);
    auto keywords = make_keyword_client(c);
    std::vector<json> rows;
    std::size_t cold = 0;
    std::size_t truncated = 0;
    for (const auto& author : corp.authors()) {
        try {
            const auto p = profile::profile_reviewer(author, corp, *keywords, c.n_keywords, window);
            truncated += p.truncated ? 1 : 0;
            rows.push_back(profile::to_json(p));
        } catch (const ColdStartError& e) {
            ++cold;
            s.log(e.what());
        }
    }
    io::write_file(c.profiles_path(), io::to_jsonl_with_header(s.header(), rows));
    s.summary({{"profiles", rows.size()},
               {"cold_start", cold},
               {"truncated", truncated},
               {"window", {window.start.str(), window.end.str()}}});
}

inline void cmd_index(const Session& s) {
    const auto& c = s.config();
    require_file(c.papers_path(), "papers (run ingest first)");
    require_file(c.authors_path(), "authors (run disambiguate first)");
    require_file(c.profiles_path(), "profiles");
    const auto corp = load_corpus(c);
    const auto profiles = load_profiles(c.profiles_path());
    const lexical::Bm25Params params{c.k1, c.b};

    std::vector<std::pair<std::string, std::string>> paper_docs, profile_docs;
    for (const auto& p : corp.papers()) paper_docs.emplace_back(p.id, p.text());
    for (const auto& p : profiles) profile_docs.emplace_back(p.author_id, p.text);
    const auto paper_index = lexical::Bm25Index::build(paper_docs, params);
    const auto profile_index = lexical::Bm25Index::build(profile_docs, params);

    auto embedder = make_embedding_client(c);
    std::vector<std::string> texts;
    for (const auto& [_, t] : paper_docs) texts.push_back(t);
    const auto paper_vecs = embed_all(*embedder, texts, clients::kQueryInstruction);
    texts.clear();
    for (const auto& [_, t] : profile_docs) texts.push_back(t);
    const auto profile_vecs = texts.empty() ? std::vector<std::vector<double>>{}
                                            : embed_all(*embedder, texts, clients::kReviewerInstruction);
    dense::EmbeddingStore paper_store(embedder->dim());
    dense::EmbeddingStore profile_store(embedder->dim());
    for (std::size_t i = 0; i < paper_docs.size(); ++i) paper_store.insert(paper_docs[i].first, paper_vecs[i]);
    for (std::size_t i = 0; i < profile_docs.size(); ++i) profile_store.insert(profile_docs[i].first, profile_vecs[i]);

    const auto dir = c.indexes_path();
    auto with_header = [&](json j) {
        j[io::kHeaderKey] = s.header();
        return j.dump() + "\n";
    };
    io::write_file(dir / "papers.bm25.json", with_header(paper_index.to_json()));
    io::write_file(dir / "profiles.bm25.json", with_header(profile_index.to_json()));
    io::write_file(dir / "papers.vec", paper_store.serialize());
    io::write_file(dir / "profiles.vec", profile_store.serialize());
    json manifest = {{io::kHeaderKey, s.header()},
                     {"files", {"papers.bm25.json", "profiles.bm25.json", "papers.vec", "profiles.vec"}},
                     {"dim", paper_store.dim()}};
    io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    s.summary({{"papers", paper_store.size()}, {"profiles", profile_store.size()}, {"dim", paper_store.dim()}});
}

inline void cmd_recall(const Session& s) {
    const auto& c = s.config();
    if (c.query.empty()) throw UsageError("--query is required");
    if (!c.recall_threshold) throw UsageError("--recall_threshold is required");
    require_file(c.papers_path(), "papers");
    require_file(c.authors_path(), "authors");
    require_file(c.indexes_path() / "papers.vec", "paper vectors (run index first)");
    const auto corp = load_corpus(c);
    const auto store = load_store(c.indexes_path() / "papers.vec");
    if (!corp.has_paper(c.query)) throw LookupError("paper " + c.query);
    const auto pool = coi::recall_candidates(corp, store, c.query, *c.recall_threshold);
    const auto kept = c.coi_enabled() ? coi::coi_filter(pool, corp.authors_of(c.query), corp.graph()) : pool;
    if (!c.report.empty()) {
        json cands = json::array();
        for (const auto& a : kept.candidates) cands.push_back({{"author_id", a}, {"papers", kept.provenance.at(a)}});
        json doc = {{io::kHeaderKey, s.header()}, {"query", c.query}, {"candidates", cands}};
        io::write_file(c.report, doc.dump(2) + "\n");
    }
    s.summary({{"query", c.query}, {"recalled", pool.candidates.size()}, {"after_coi", kept.candidates.size()},
               {"candidates", kept.candidates}});
}

inline void cmd_prefgen(const Session& s) {
    const auto& c = s.config();
    require_file(c.papers_path(), "papers");
    require_file(c.authors_path(), "authors");
    require_file(c.profiles_path(), "profiles");
    require_file(c.indexes_path() / "papers.bm25.json", "paper index (run index first)");
    require_file(c.indexes_path() / "profiles.bm25.json", "profile index (run index first)");
    if (!c.holdout.empty()) require_file(c.holdout, "holdout list");
    if (!c.benchmark.empty()) require_file(c.benchmark, "benchmark");
    const auto corp = load_corpus(c);
    const auto profiles = load_profiles(c.profiles_path());
    const auto paper_index = load_bm25(c.indexes_path() / "papers.bm25.json");
    const auto profile_index = load_bm25(c.indexes_path() / "profiles.bm25.json");
    const auto holdout = load_holdout(c);
    const auto res = prefgen::generate_training_set(corp, profiles, {paper_index, profile_index}, c.budget, c.seed,
                                                    holdout, c.coi_enabled());
    if (res.shortfall > 0) s.log("budget short by " + std::to_string(res.shortfall) + " triplets");
    std::vector<json> rows;
    std::size_t paper_view = 0;
    std::size_t hard = 0;
    for (const auto& t : res.triplets) {
        rows.push_back(prefgen::to_json(t));
        paper_view += t.view == prefgen::View::PaperCentric ? 1 : 0;
        hard += t.difficulty == prefgen::Difficulty::Hard ? 1 : 0;
    }
    io::write_file(c.triplets_path(), io::to_jsonl_with_header(s.header(), rows));
    s.summary({{"triplets", res.triplets.size()},
               {"paper_centric", paper_view},
               {"reviewer_centric", res.triplets.size() - paper_view},
               {"hard", hard},
               {"easy", res.triplets.size() - hard},
               {"anchors_visited", res.anchors_visited},
               {"shortfall", res.shortfall},
               {"holdout", holdout.size()}});
}

inline train::TrainConfig train_config(const PipelineConfig& c) {
    train::TrainConfig t;
    t.learning_rate = c.lr;
    t.epochs = c.epochs;
    t.batch_size = c.batch;
    t.warmup_fraction = c.warmup;
    t.patience = c.patience;
    t.seed = c.seed;
    return t;
}

inline void cmd_train(const Session& s) {
    const auto& c = s.config();
    require_file(c.triplets_path(), "triplets (run prefgen first)");
    require_file(c.indexes_path() / "papers.vec", "paper vectors (run index first)");
    require_file(c.indexes_path() / "profiles.vec", "profile vectors (run index first)");
    const auto triplets = load_triplets(c.triplets_path());
    const auto table =
        embedding_table(load_store(c.indexes_path() / "papers.vec"), load_store(c.indexes_path() / "profiles.vec"));
    std::vector<train::KeyedTriplet> keyed_triplets;
    for (const auto& t : triplets) keyed_triplets.push_back(keyed(t));
    if (table.empty()) throw DataError("no embeddings to train on");
    const auto dim = table.begin()->second.size();
    const auto initial = train::AdapterModel::init(dim, c.rank, c.temperature, c.lambda_ce, c.seed);
    const auto result = train::train_adapter(initial, keyed_triplets, table, train_config(c));
    for (const auto& r : result.history) {
        s.log("epoch " + std::to_string(r.epoch) + " train " + std::to_string(r.train_loss) + " val " +
              std::to_string(r.val_loss));
    }
    const auto provenance = s.header().dump();
    io::write_file(c.model_path(), train::serialize(result.model, provenance));
    io::write_file(c.model_path().string() + ".history.csv",
                   "# " + provenance + "\n" + train::history_csv(result.history));
    s.summary({{"triplets", triplets.size()},
               {"train", result.train_indices.size()},
               {"val", result.val_indices.size()},
               {"epochs_run", result.history.size() - 1},
               {"best_epoch", result.best_epoch},
               {"stopped_early", result.stopped_early},
               {"initial_val_loss", result.history.front().val_loss},
               {"best_val_loss", result.history[static_cast<std::size_t>(result.best_epoch)].val_loss}});
}

/// Loads what the chosen scorer needs into `ctx`.
inline void load_scoring(const PipelineConfig& c, ScoringContext& ctx, const corpus::Corpus& corp) {
    const auto needs = needs_of(c.scorer);
    ctx.corpus = &corp;
    const auto dir = c.indexes_path();
    if (needs.profile_index) {
        require_file(dir / "profiles.bm25.json", "profile index (run index first)");
        ctx.profile_index = load_bm25(dir / "profiles.bm25.json");
    }
    if (needs.paper_vectors) {
        require_file(dir / "papers.vec", "paper vectors (run index first)");
        ctx.paper_vectors = load_store(dir / "papers.vec");
    }
    if (needs.profile_vectors) {
        require_file(dir / "profiles.vec", "profile vectors (run index first)");
        ctx.profile_vectors = load_store(dir / "profiles.vec");
    }
    if (needs.model) {
        require_file(c.model_path(), "adapter checkpoint (run train first)");
        ctx.model = train::deserialize(io::read_file(c.model_path()));
    }
}

inline void cmd_rank(const Session& s) {
    const auto& c = s.config();
    if (c.query.empty()) throw UsageError("--query is required");
    needs_of(c.scorer);
    require_file(c.papers_path(), "papers");
    require_file(c.authors_path(), "authors");
    require_file(c.profiles_path(), "profiles");
    const auto corp = load_corpus(c);
    if (!corp.has_paper(c.query)) throw LookupError("paper " + c.query);
    ScoringContext ctx;
    for (auto& p : load_profiles(c.profiles_path())) ctx.profiles.emplace(p.author_id, std::move(p));
    load_scoring(c, ctx, corp);

    coi::CandidatePool pool;
    pool.query_paper_id = c.query;
    if (c.recall_threshold) {
        const auto store = ctx.paper_vectors ? *ctx.paper_vectors : load_store(c.indexes_path() / "papers.vec");
        pool = coi::recall_candidates(corp, store, c.query, *c.recall_threshold);
    } else {
        for (const auto& [id, _] : ctx.profiles) {
            pool.candidates.insert(id);
            pool.provenance[id] = {};
        }
    }
    if (c.coi_enabled()) pool = coi::coi_filter(pool, corp.authors_of(c.query), corp.graph());

    const auto scorer = make_scorer(c.scorer, ctx);
    std::vector<lexical::ScoredDoc> ranked;
    std::size_t unscored = 0;
    for (const auto& id : pool.candidates) {
        const auto v = scorer->score(c.query, id);
        if (v) {
            ranked.push_back({id, *v});
        } else {
            ++unscored;
        }
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.score != y.score ? x.score > y.score : x.doc_id < y.doc_id;
    });
    if (ranked.size() > c.top_k) ranked.resize(c.top_k);
    json results = json::array();
    for (const auto& r : ranked) {
        const auto name = corp.has_author(r.doc_id) ? corp.author(r.doc_id).canonical_name : std::string();
        results.push_back({{"author_id", r.doc_id}, {"name", name}, {"score", r.score}});
    }
    if (unscored > 0) s.log(std::to_string(unscored) + " candidates had no score under " + c.scorer);
    s.summary({{"query", c.query},
               {"scorer", c.scorer},
               {"candidates", pool.candidates.size()},
               {"unscored", unscored},
               {"results", results}});
}

inline void write_report(const Session& s, const fs::path& base, const json& body, const std::string& tsv) {
    json doc = body;
    doc[io::kHeaderKey] = s.header();
    io::write_file(base.string() + ".json", doc.dump(2) + "\n");
    io::write_file(base.string() + ".tsv", "# " + s.header().dump() + "\n" + tsv);
}

inline void cmd_eval(const Session& s) {
    const auto& c = s.config();
    if (c.benchmark.empty()) throw UsageError("--benchmark is required");
    needs_of(c.scorer);
    require_file(c.benchmark, "benchmark");
    require_file(c.papers_path(), "papers");
    require_file(c.authors_path(), "authors");
    require_file(c.profiles_path(), "profiles");
    const auto corp = load_corpus(c);
    std::set<std::string> known;
    for (const auto& p : corp.papers()) known.insert(p.id);
    const auto bench = eval::load_benchmark(io::read_records(c.benchmark), c.scale_max, known);
    if (bench.duplicates_dropped > 0) s.log(std::to_string(bench.duplicates_dropped) + " duplicate ratings replaced");

    ScoringContext ctx;
    for (auto& p : load_profiles(c.profiles_path())) ctx.profiles.emplace(p.author_id, std::move(p));
    load_scoring(c, ctx, corp);
    const auto scorer = make_scorer(c.scorer, ctx);
    eval::ScoreTable table;
    for (const auto& r : bench.records) {
        if (const auto v = scorer->score(r.paper_id, r.reviewer_id)) table.set(r.paper_id, r.reviewer_id, *v);
    }
    const auto report = eval::evaluate_benchmark(bench.records, table, c.scorer);
    write_report(s, c.report_path("report"), eval::to_json(report), eval::to_tsv(report));
    s.summary({{"scorer", c.scorer},
               {"records", report.records},
               {"pairs", report.combined.pairs},
               {"loss", eval::to_json(report.combined)["loss"]},
               {"precision", eval::to_json(report.combined)["precision"]}});
}

inline void cmd_stats(const Session& s) {
    const auto& c = s.config();
    if (c.benchmark.empty()) throw UsageError("--benchmark is required");
    require_file(c.benchmark, "benchmark");
    const auto bench = eval::load_benchmark(io::read_records(c.benchmark), c.scale_max);
    const auto stats = eval::benchmark_stats(bench.records, c.scale_max);
    const auto pc = eval::derive_pairs(bench.records, eval::View::PaperCentric).size();
    const auto rc = eval::derive_pairs(bench.records, eval::View::ReviewerCentric).size();
    json body = eval::to_json(stats);
    body["pairs"] = {{"paper_centric", pc}, {"reviewer_centric", rc}};
    write_report(s, c.report_path("stats"), body, eval::to_tsv(stats));
    json ratings = json::object();
    for (const auto& [k, v] : stats.ratings.counts) ratings[std::to_string(k)] = v;
    s.summary({{"records", stats.records},
               {"ratings", ratings},
               {"paper_centric_pairs", pc},
               {"reviewer_centric_pairs", rc}});
}

inline void cmd_gradcheck(const Session& s) {
    const auto& c = s.config();
    require_file(c.triplets_path(), "triplets (run prefgen first)");
    require_file(c.indexes_path() / "papers.vec", "paper vectors");
    require_file(c.indexes_path() / "profiles.vec", "profile vectors");
    const auto triplets = load_triplets(c.triplets_path());
    if (triplets.empty()) throw DataError("no triplets to check");
    const auto table =
        embedding_table(load_store(c.indexes_path() / "papers.vec"), load_store(c.indexes_path() / "profiles.vec"));
    train::AdapterModel model;
    if (!c.model.empty()) {
        require_file(c.model, "adapter checkpoint");
        model = train::deserialize(io::read_file(c.model));
    } else {
        model = train::AdapterModel::init(table.begin()->second.size(), c.rank, c.temperature, c.lambda_ce, c.seed);
        // A fresh B is zero, which leaves dL/dA at zero; probe a generic state instead.
        Rng rng(c.seed ^ 0x5bd1e995ULL);
        for (Eigen::Index i = 0; i < model.b.rows(); ++i) {
            for (Eigen::Index j = 0; j < model.b.cols(); ++j) model.b(i, j) = 0.02 * rng.normal();
        }
    }
    std::vector<train::KeyedTriplet> batch;
    for (std::size_t i = 0; i < std::min<std::size_t>(c.batch, triplets.size()); ++i) batch.push_back(keyed(triplets[i]));
    const auto report = train::grad_check(model, batch, table, c.epsilon, c.coordinates, c.seed);
    s.summary({{"batch", batch.size()},
               {"coordinates", report.coordinates},
               {"epsilon", c.epsilon},
               {"max_relative_error", report.max_relative_error},
               {"max_abs_analytic", report.max_abs_analytic}});
}

// ---------------------------------------------------------------- dispatch

struct CommandSpec {
    const char* name;
    const char* help;
    std::vector<const char*> options;
    void (*run)(const Session&);
};

inline const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> table = {
        {"ingest", "normalize raw paper records", {"corpus"}, cmd_ingest},
        {"disambiguate", "resolve author mentions into authors", {"backend"}, cmd_disambiguate},
        {"profile", "build reviewer keyword profiles", {"profiles", "backend", "n_keywords", "reference_date", "prompt"},
         cmd_profile},
        {"index", "build BM25 indexes and embedding stores", {"profiles", "indexes", "backend", "dim", "k1", "b"},
         cmd_index},
        {"recall", "dense threshold recall of candidate reviewers",
         {"indexes", "query", "recall_threshold", "coi", "report"}, cmd_recall},
        {"prefgen", "generate preference triplets",
         {"profiles", "indexes", "triplets", "budget", "seed", "holdout", "benchmark", "coi"}, cmd_prefgen},
        {"train", "train the adapter",
         {"indexes", "triplets", "model", "rank", "temperature", "lambda_ce", "lr", "epochs", "batch", "seed",
          "patience", "warmup"},
         cmd_train},
        {"rank", "rank reviewers for one paper",
         {"profiles", "indexes", "model", "query", "scorer", "top_k", "recall_threshold", "coi"}, cmd_rank},
        {"eval", "score a benchmark", {"profiles", "indexes", "model", "benchmark", "scorer", "scale_max", "report"},
         cmd_eval},
        {"stats", "benchmark statistics", {"benchmark", "scale_max", "report"}, cmd_stats},
        {"gradcheck", "finite-difference gradient check",
         {"indexes", "triplets", "model", "rank", "temperature", "lambda_ce", "batch", "seed", "epsilon",
          "coordinates"},
         cmd_gradcheck},
    };
    return table;
}

inline int exit_code_for(const std::exception_ptr& ep, const std::string& stage, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const UsageError& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 2;
    } catch (const ExternalError& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 3;
    } catch (const nlohmann::json::exception& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error[" << stage << "]: " << e.what() << '\n';
        return 2;
    }
}

/// Parses argv, resolves the effective config (flags > --config file >
/// defaults) and runs one subcommand. Returns the process exit code.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    CLI::App app{"revmatch: reviewer matching pipeline"};
    app.require_subcommand(1, 1);
    struct Bound {
        CLI::App* sub;
        const CommandSpec* spec;
        std::string config_path;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
    };
    std::vector<std::unique_ptr<Bound>> bound;
    for (const auto& spec : commands()) {
        auto b = std::make_unique<Bound>();
        b->spec = &spec;
        b->sub = app.add_subcommand(spec.name, spec.help);
        b->sub->add_option("--config", b->config_path, "JSON config file");
        std::vector<const char*> names = {"workdir"};
        names.insert(names.end(), spec.options.begin(), spec.options.end());
        for (const char* name : names) {
            const auto& f = field(name);
            b->options[name] = b->sub->add_option(std::string("--") + name, b->values[name], f.help);
        }
        bound.push_back(std::move(b));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[cli]: " << e.what() << '\n';
        return 1;
    }
    for (const auto& b : bound) {
        if (!b->sub->parsed()) continue;
        const std::string stage = b->spec->name;
        try {
            PipelineConfig config;
            if (!b->config_path.empty()) {
                require_file(b->config_path, "config file");
                apply_config_file(config, b->config_path);
            }
            for (const auto& [name, opt] : b->options) {
                if (opt->count() > 0) set_from_string(config, field(name), b->values[name]);
            }
            validate(config);
            Session session(std::move(config), stage, out, err);
            b->spec->run(session);
            return 0;
        } catch (...) {
            return exit_code_for(std::current_exception(), stage, err);
        }
    }
    err << "error[cli]: no subcommand\n";
    return 1;
}

}  // namespace revmatch::cli
