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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "revmatch/error.hpp"
#include "revmatch/jsonl.hpp"

namespace revmatch::cli {

using json = nlohmann::json;

/// Everything a subcommand may read. Empty path strings mean "derive from
/// workdir"; recall_threshold has no default on purpose.
struct PipelineConfig {
    // paths
    std::string workdir = "revmatch_work";
    std::string corpus;
    std::string profiles;
    std::string indexes;
    std::string triplets;
    std::string model;
    std::string benchmark;
    std::string report;
    std::string holdout;
    std::string prompt;

    // clients
    std::string backend = "stub";
    std::uint64_t dim = 64;

    // knobs
    std::optional<double> recall_threshold;
    double k1 = 1.2;
    double b = 0.75;
    int n_keywords = 5;
    std::string reference_date;
    std::uint64_t rank = 16;
    double temperature = 0.0634;
    double lambda_ce = 0.915;
    double lr = 1e-3;
    int epochs = 15;
    std::uint64_t batch = 4;
    std::uint64_t seed = 622;
    int patience = 6;
    double warmup = 0.05;
    std::uint64_t budget = 1000;
    std::string coi = "on";
    std::string query;
    std::string scorer = "adapter";
    std::uint64_t top_k = 10;
    int scale_max = 5;
    double epsilon = 1e-5;
    std::uint64_t coordinates = 24;

    std::filesystem::path dir() const { return workdir; }
    std::filesystem::path papers_path() const { return dir() / "papers.jsonl"; }
    std::filesystem::path mentions_path() const { return dir() / "mentions.jsonl"; }
    std::filesystem::path rejects_path() const { return dir() / "rejects.jsonl"; }
    std::filesystem::path authors_path() const { return dir() / "authors.jsonl"; }
    std::filesystem::path profiles_path() const {
        return profiles.empty() ? dir() / "profiles.jsonl" : std::filesystem::path(profiles);
    }
    std::filesystem::path indexes_path() const {
        return indexes.empty() ? dir() / "indexes" : std::filesystem::path(indexes);
    }
    std::filesystem::path triplets_path() const {
        return triplets.empty() ? dir() / "triplets.jsonl" : std::filesystem::path(triplets);
    }
    std::filesystem::path model_path() const {
        return model.empty() ? dir() / "adapter.bin" : std::filesystem::path(model);
    }
    std::filesystem::path report_path(std::string_view fallback) const {
        return report.empty() ? dir() / fallback : std::filesystem::path(report);
    }
    bool coi_enabled() const { return coi == "on"; }
};

enum class FieldKind { Path, Text, Double, OptDouble, Int, UInt };

struct Field {
    const char* name;
    FieldKind kind;
    std::variant<std::string PipelineConfig::*, double PipelineConfig::*, std::optional<double> PipelineConfig::*,
                 int PipelineConfig::*, std::uint64_t PipelineConfig::*>
        member;
    const char* help;
};

inline const std::vector<Field>& fields() {
    using C = PipelineConfig;
    static const std::vector<Field> table = {
        {"workdir", FieldKind::Path, &C::workdir, "directory for intermediate artifacts"},
        {"corpus", FieldKind::Path, &C::corpus, "raw corpus JSONL"},
        {"profiles", FieldKind::Path, &C::profiles, "reviewer profiles JSONL"},
        {"indexes", FieldKind::Path, &C::indexes, "index directory"},
        {"triplets", FieldKind::Path, &C::triplets, "preference triplets JSONL"},
        {"model", FieldKind::Path, &C::model, "adapter checkpoint"},
        {"benchmark", FieldKind::Path, &C::benchmark, "benchmark ratings JSONL"},
        {"report", FieldKind::Path, &C::report, "report path prefix"},
        {"holdout", FieldKind::Path, &C::holdout, "file of held-out paper ids, one per line"},
        {"prompt", FieldKind::Path, &C::prompt, "keyword prompt template file (http backend)"},
        {"backend", FieldKind::Text, &C::backend, "client backend: stub | http"},
        {"dim", FieldKind::UInt, &C::dim, "stub embedding dimension"},
        {"recall_threshold", FieldKind::OptDouble, &C::recall_threshold, "cosine recall threshold in [-1, 1]"},
        {"k1", FieldKind::Double, &C::k1, "BM25 k1"},
        {"b", FieldKind::Double, &C::b, "BM25 b"},
        {"n_keywords", FieldKind::Int, &C::n_keywords, "keywords per paper"},
        {"reference_date", FieldKind::Text, &C::reference_date, "end of the two-year profiling window (ISO date)"},
        {"rank", FieldKind::UInt, &C::rank, "adapter rank"},
        {"temperature", FieldKind::Double, &C::temperature, "loss temperature"},
        {"lambda_ce", FieldKind::Double, &C::lambda_ce, "cross-entropy weight"},
        {"lr", FieldKind::Double, &C::lr, "learning rate"},
        {"epochs", FieldKind::Int, &C::epochs, "training epochs"},
        {"batch", FieldKind::UInt, &C::batch, "mini-batch size"},
        {"seed", FieldKind::UInt, &C::seed, "random seed"},
        {"patience", FieldKind::Int, &C::patience, "early-stopping patience"},
        {"warmup", FieldKind::Double, &C::warmup, "warmup fraction of steps"},
        {"budget", FieldKind::UInt, &C::budget, "triplet budget"},
        {"coi", FieldKind::Text, &C::coi, "conflict-of-interest filtering: on | off"},
        {"query", FieldKind::Text, &C::query, "query paper id"},
        {"scorer", FieldKind::Text, &C::scorer, "adapter | bm25 | tfidf | pooled:mean | pooled:p75 | pooled:max"},
        {"top_k", FieldKind::UInt, &C::top_k, "number of reviewers to print"},
        {"scale_max", FieldKind::Int, &C::scale_max, "top of the rating scale"},
        {"epsilon", FieldKind::Double, &C::epsilon, "finite-difference step"},
        {"coordinates", FieldKind::UInt, &C::coordinates, "coordinates probed by gradcheck"},
    };
    return table;
}

inline const Field& field(std::string_view name) {
    for (const auto& f : fields()) {
        if (name == f.name) return f;
    }
    throw UsageError("unknown config key: " + std::string(name));
}

namespace detail {

template <typename T>
T parse_number(std::string_view name, std::string_view raw) {
    T value{};
    const auto* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(raw.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("--" + std::string(name) + ": not a valid number: " + std::string(raw));
    }
    return value;
}

}  // namespace detail

/// Sets one field from its command-line spelling.
inline void set_from_string(PipelineConfig& c, const Field& f, const std::string& raw) {
    std::visit(
        [&](auto member) {
            using M = std::remove_cvref_t<decltype(c.*member)>;
            if constexpr (std::is_same_v<M, std::string>) {
                c.*member = raw;
            } else if constexpr (std::is_same_v<M, std::optional<double>>) {
                c.*member = detail::parse_number<double>(f.name, raw);
            } else if constexpr (std::is_same_v<M, std::uint64_t>) {
                if (!raw.empty() && raw.front() == '-') throw UsageError("--" + std::string(f.name) + " must be >= 0");
                c.*member = detail::parse_number<std::uint64_t>(f.name, raw);
            } else {
                c.*member = detail::parse_number<M>(f.name, raw);
            }
        },
        f.member);
}

/// Sets one field from a config-file value, checking its JSON type.
inline void set_from_json(PipelineConfig& c, const Field& f, const json& v) {
    try {
        std::visit(
            [&](auto member) {
                using M = std::remove_cvref_t<decltype(c.*member)>;
                if constexpr (std::is_same_v<M, std::string>) {
                    if (!v.is_string()) throw UsageError("expected a string");
                    c.*member = v.get<std::string>();
                } else if constexpr (std::is_same_v<M, std::optional<double>>) {
                    if (v.is_null()) {
                        c.*member = std::nullopt;
                    } else {
                        if (!v.is_number()) throw UsageError("expected a number");
                        c.*member = v.get<double>();
                    }
                } else if constexpr (std::is_same_v<M, double>) {
                    if (!v.is_number()) throw UsageError("expected a number");
                    c.*member = v.get<double>();
                } else if constexpr (std::is_same_v<M, std::uint64_t>) {
                    if (!v.is_number_unsigned()) throw UsageError("expected a non-negative integer");
                    c.*member = v.get<std::uint64_t>();
                } else {
                    if (!v.is_number_integer()) throw UsageError("expected an integer");
                    c.*member = v.get<M>();
                }
            },
            f.member);
    } catch (const UsageError& e) {
        throw UsageError("config key " + std::string(f.name) + ": " + e.what());
    }
}

/// Applies a config document; unknown keys are rejected.
inline void apply_config_file(PipelineConfig& c, const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw UsageError("config file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file " + path.string() + " must hold a JSON object");
    for (const auto& [key, value] : doc.items()) set_from_json(c, field(key), value);
}

/// The effective non-path settings, echoed into artifact headers. Paths are
/// left out so that identical runs in different directories match byte for byte.
inline json effective_config(const PipelineConfig& c) {
    json out = json::object();
    for (const auto& f : fields()) {
        if (f.kind == FieldKind::Path) continue;
        std::visit(
            [&](auto member) {
                using M = std::remove_cvref_t<decltype(c.*member)>;
                if constexpr (std::is_same_v<M, std::optional<double>>) {
                    out[f.name] = (c.*member) ? json(*(c.*member)) : json(nullptr);
                } else {
                    out[f.name] = c.*member;
                }
            },
            f.member);
    }
    return out;
}

/// Range checks shared by every subcommand.
inline void validate(const PipelineConfig& c) {
    if (c.backend != "stub" && c.backend != "http") throw UsageError("--backend must be stub or http");
    if (c.coi != "on" && c.coi != "off") throw UsageError("--coi must be on or off");
    if (c.recall_threshold && !(*c.recall_threshold >= -1.0 && *c.recall_threshold <= 1.0)) {
        throw UsageError("--recall_threshold must lie in [-1, 1]");
    }
    if (!(c.k1 >= 0.0) || !(c.b >= 0.0 && c.b <= 1.0)) throw UsageError("--k1 >= 0 and --b in [0, 1] required");
    if (c.n_keywords <= 0) throw UsageError("--n_keywords must be positive");
    if (c.dim == 0 && c.backend == "stub") throw UsageError("--dim must be positive");
    if (c.rank == 0) throw UsageError("--rank must be positive");
    if (!(c.temperature > 0.0)) throw UsageError("--temperature must be positive");
    if (!(c.lambda_ce >= 0.0)) throw UsageError("--lambda_ce must be >= 0");
    if (c.scale_max < 2) throw UsageError("--scale_max must be >= 2");
    if (c.top_k == 0) throw UsageError("--top_k must be positive");
}

}  // namespace revmatch::cli
