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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "revmatch/corpus/types.hpp"
#include "revmatch/date.hpp"
#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::corpus {

enum class RejectReason {
    MalformedJson,
    MalformedField,
    MissingId,
    MissingTitle,
    MissingAbstract,
    MissingAuthors,
    MissingAuthorName,
    BadDate,
};

inline std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::MalformedJson: return "malformed_json";
        case RejectReason::MalformedField: return "malformed_field";
        case RejectReason::MissingId: return "missing_id";
        case RejectReason::MissingTitle: return "missing_title";
        case RejectReason::MissingAbstract: return "missing_abstract";
        case RejectReason::MissingAuthors: return "missing_authors";
        case RejectReason::MissingAuthorName: return "missing_author_name";
        case RejectReason::BadDate: return "bad_date";
    }
    return "unknown";
}

struct Reject {
    std::size_t line = 0;  // 1-based position in the input stream
    std::string id;        // empty when the id itself could not be read
    RejectReason reason{};
};

struct IngestResult {
    std::vector<Paper> papers;
    std::vector<AuthorMention> mentions;
    std::vector<Reject> rejects;
    std::size_t superseded = 0;  // older revisions dropped by the latest-version rule
};

namespace detail {

struct RawAuthor {
    std::string name;
    std::string email;
    std::string affiliation;
};

struct RawPaper {
    Paper paper;
    std::vector<RawAuthor> authors;
};

using json = nlohmann::json;

/// Optional string field: absent or null -> "", non-string -> malformed.
inline bool read_string(const json& obj, const char* key, std::string& out) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        out.clear();
        return true;
    }
    if (!it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

inline std::variant<RawPaper, RejectReason> parse_record(const json& rec) {
    if (!rec.is_object()) return RejectReason::MalformedJson;
    RawPaper raw;
    std::string subarea;
    std::string title;
    std::string abstract;
    std::string revised;
    if (!read_string(rec, "id", raw.paper.id) || !read_string(rec, "title", title) ||
        !read_string(rec, "abstract", abstract) || !read_string(rec, "last_revised", revised) ||
        !read_string(rec, "subarea", subarea)) {
        return RejectReason::MalformedField;
    }
    raw.paper.id = text::trim(raw.paper.id);
    if (raw.paper.id.empty()) return RejectReason::MissingId;

    const auto authors = rec.find("authors");
    if (authors != rec.end() && !authors->is_null() && !authors->is_array()) return RejectReason::MalformedField;
    if (authors != rec.end() && authors->is_array()) {
        for (const auto& a : *authors) {
            if (!a.is_object()) return RejectReason::MalformedField;
            RawAuthor ra;
            if (!read_string(a, "name", ra.name) || !read_string(a, "email", ra.email) ||
                !read_string(a, "affiliation", ra.affiliation)) {
                return RejectReason::MalformedField;
            }
            ra.name = text::normalize_whitespace(ra.name);
            ra.email = text::to_lower(text::trim(ra.email));
            ra.affiliation = text::normalize_whitespace(ra.affiliation);
            raw.authors.push_back(std::move(ra));
        }
    }

    raw.paper.title = text::normalize_whitespace(title);
    raw.paper.abstract = text::normalize_whitespace(abstract);
    if (raw.paper.title.empty()) return RejectReason::MissingTitle;
    if (raw.paper.abstract.empty()) return RejectReason::MissingAbstract;
    if (raw.authors.empty()) return RejectReason::MissingAuthors;
    for (const auto& a : raw.authors) {
        if (a.name.empty()) return RejectReason::MissingAuthorName;
    }
    revised = text::trim(revised);
    if (!Date::parse(revised)) return RejectReason::BadDate;
    raw.paper.last_revised = revised;
    raw.paper.subarea = parse_subarea(subarea);
    return raw;
}

}  // namespace detail

/// Filters, normalizes, and deduplicates raw JSONL metadata records.
///
/// Records missing a title, abstract, or any author name are rejected with a
/// reason code, as are lines that do not parse; the stream is never aborted.
/// When several records share an id, the one with the latest last_revised is
/// kept (the earliest-seen wins a tie) at the position where the id first
/// appeared. Mention ids are "<paper id>#<author index>".
inline IngestResult ingest_papers(const std::vector<std::string>& lines) {
    IngestResult result;
    std::vector<detail::RawPaper> kept;
    std::map<std::string, std::size_t> slot_by_id;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception&) {
            result.rejects.push_back({lineno, "", RejectReason::MalformedJson});
            continue;
        }
        auto parsed = detail::parse_record(rec);
        if (auto* reason = std::get_if<RejectReason>(&parsed)) {
            std::string id;
            if (rec.is_object() && rec.contains("id") && rec["id"].is_string()) id = rec["id"].get<std::string>();
            result.rejects.push_back({lineno, id, *reason});
            continue;
        }
        auto& raw = std::get<detail::RawPaper>(parsed);
        const auto it = slot_by_id.find(raw.paper.id);
        if (it == slot_by_id.end()) {
            slot_by_id.emplace(raw.paper.id, kept.size());
            kept.push_back(std::move(raw));
            continue;
        }
        ++result.superseded;
        auto& existing = kept[it->second];
        if (raw.paper.revised_date() > existing.paper.revised_date()) existing = std::move(raw);
    }

    for (auto& raw : kept) {
        for (std::size_t k = 0; k < raw.authors.size(); ++k) {
            AuthorMention m;
            m.mention_id = raw.paper.id + "#" + std::to_string(k);
            m.name = raw.authors[k].name;
            m.email = raw.authors[k].email;
            m.affiliation = raw.authors[k].affiliation;
            m.paper_id = raw.paper.id;
            raw.paper.author_mention_ids.push_back(m.mention_id);
            result.mentions.push_back(std::move(m));
        }
        result.papers.push_back(std::move(raw.paper));
    }
    return result;
}

// Serialization of the normalized corpus.

inline nlohmann::json to_json(const Paper& p) {
    return {{"id", p.id},
            {"title", p.title},
            {"abstract", p.abstract},
            {"author_mention_ids", p.author_mention_ids},
            {"last_revised", p.last_revised},
            {"subarea", std::string(to_string(p.subarea))}};
}

inline Paper paper_from_json(const nlohmann::json& j) {
    Paper p;
    p.id = j.at("id").get<std::string>();
    p.title = j.at("title").get<std::string>();
    p.abstract = j.at("abstract").get<std::string>();
    p.author_mention_ids = j.at("author_mention_ids").get<std::vector<std::string>>();
    p.last_revised = j.at("last_revised").get<std::string>();
    p.subarea = parse_subarea(j.value("subarea", "OTHER"));
    if (!Date::parse(p.last_revised)) throw DataError("paper " + p.id + ": bad last_revised");
    return p;
}

inline nlohmann::json to_json(const AuthorMention& m) {
    return {{"mention_id", m.mention_id},
            {"name", m.name},
            {"email", m.email},
            {"affiliation", m.affiliation},
            {"paper_id", m.paper_id}};
}

inline AuthorMention mention_from_json(const nlohmann::json& j) {
    return {j.at("mention_id").get<std::string>(), j.at("name").get<std::string>(), j.value("email", ""),
            j.value("affiliation", ""), j.at("paper_id").get<std::string>()};
}

inline nlohmann::json to_json(const Author& a) {
    return {{"author_id", a.author_id},
            {"canonical_name", a.canonical_name},
            {"mention_ids", a.mention_ids},
            {"paper_ids", a.paper_ids}};
}

inline Author author_from_json(const nlohmann::json& j) {
    Author a;
    a.author_id = j.at("author_id").get<std::string>();
    a.canonical_name = j.at("canonical_name").get<std::string>();
    a.mention_ids = j.at("mention_ids").get<std::set<std::string>>();
    a.paper_ids = j.at("paper_ids").get<std::set<std::string>>();
    if (a.mention_ids.empty()) throw DataError("author " + a.author_id + " has no mentions");
    return a;
}

}  // namespace revmatch::corpus
