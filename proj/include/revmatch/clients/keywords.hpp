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
#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "revmatch/clients/transport.hpp"
#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::clients {

struct KeywordRequest {
    std::string title;
    std::string abstract;
    int n_keywords = 5;
};

struct KeywordResponse {
    std::vector<std::string> keywords;
};

/// The 50-word English stopword list used by the offline keyword extractor.
inline constexpr std::array<std::string_view, 50> kStopwords = {
    "about", "after", "all",   "also",  "an",    "and",   "any",   "are",   "as",    "at",
    "be",    "been",  "but",   "by",    "can",   "for",   "from",  "has",   "have",  "in",
    "into",  "is",    "it",    "its",   "more",  "not",   "of",    "on",    "or",    "other",
    "our",   "over",  "such",  "than",  "that",  "the",   "their", "then",  "there", "these",
    "they",  "this",  "to",    "under", "using", "was",   "we",    "which", "with",  "while",
};

inline bool is_stopword(std::string_view token) {
    return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

/// Keyword-extraction prompt. Placeholders: {title}, {abstract}, {N}.
inline constexpr std::string_view kKeywordPromptTemplate =
    "Role: You are an academic keyword extraction assistant.\n"
    "\n"
    "Task: Extract precise, domain-representative keywords from the research paper's title and abstract. "
    "These keywords should represent research domains, subfields, or areas of study most relevant to the "
    "paper's focus.\n"
    "\n"
    "[Input Data]\n"
    "Title: {title}\n"
    "Abstract: {abstract}\n"
    "\n"
    "[Output Requirements]\n"
    "Please extract {N} concise and specific keywords. You must output ONLY the keywords as a comma-separated "
    "list, with no additional text, explanations, or formatting.\n"
    "\n"
    "Example Output: Large Language Models, Information Retrieval, Graph Neural Networks\n";

/// Substitutes every {title}, {abstract} and {N} in a single left-to-right
/// pass, so placeholder-like text inside the substituted values stays literal.
inline std::string render_prompt(std::string_view tmpl, const KeywordRequest& req) {
    const std::array<std::pair<std::string_view, std::string>, 3> subs = {{
        {"{title}", req.title},
        {"{abstract}", req.abstract},
        {"{N}", std::to_string(req.n_keywords)},
    }};
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        bool replaced = false;
        for (const auto& [key, value] : subs) {
            if (tmpl.substr(pos, key.size()) == key) {
                out += value;
                pos += key.size();
                replaced = true;
                break;
            }
        }
        if (!replaced) out.push_back(tmpl[pos++]);
    }
    return out;
}

/// Parses a comma-separated reply: segments are trimmed, empties dropped, and
/// at most `n_keywords` kept. A reply spanning several lines or with no
/// non-empty segment is a ContractError carrying the raw reply.
inline std::vector<std::string> parse_keyword_reply(std::string_view reply, int n_keywords) {
    const std::string trimmed = text::trim(reply);
    if (trimmed.find('\n') != std::string::npos) {
        throw ContractError("keyword reply is not a single comma-separated list: \"" + std::string(reply) + "\"");
    }
    std::vector<std::string> keywords;
    std::size_t start = 0;
    while (start <= trimmed.size()) {
        const auto comma = trimmed.find(',', start);
        const auto end = comma == std::string::npos ? trimmed.size() : comma;
        auto kw = text::trim(std::string_view(trimmed).substr(start, end - start));
        if (!kw.empty() && static_cast<int>(keywords.size()) < n_keywords) keywords.push_back(std::move(kw));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (keywords.empty()) {
        throw ContractError("keyword reply has no keywords: \"" + std::string(reply) + "\"");
    }
    return keywords;
}

class KeywordClient {
  public:
    virtual ~KeywordClient() = default;
    virtual KeywordResponse extract(const KeywordRequest& req) = 0;
};

inline void check_request(const KeywordRequest& req) {
    if (req.n_keywords <= 0) throw UsageError("n_keywords must be positive");
    if (text::trim(req.title).empty() && text::trim(req.abstract).empty()) {
        throw ContractError("keyword request needs a title or an abstract");
    }
}

/// Offline extractor: the `n_keywords` most frequent non-stopword tokens of
/// title + abstract, ties broken lexicographically.
class StubKeywordClient : public KeywordClient {
  public:
    KeywordResponse extract(const KeywordRequest& req) override {
        check_request(req);
        std::map<std::string, int> counts;
        for (auto& t : text::tokenize(req.title + " " + req.abstract)) {
            if (!is_stopword(t)) ++counts[t];
        }
        std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        KeywordResponse resp;
        for (const auto& [token, _] : ranked) {
            if (static_cast<int>(resp.keywords.size()) == req.n_keywords) break;
            resp.keywords.push_back(token);
        }
        if (resp.keywords.empty()) throw ContractError("no keyword candidates in \"" + req.title + "\"");
        return resp;
    }
};

/// Renders the prompt and POSTs {"prompt", "title", "abstract", "n_keywords"};
/// expects {"reply": "kw1, kw2, ..."}.
class HttpKeywordClient : public KeywordClient {
  public:
    HttpKeywordClient(std::shared_ptr<Transport> transport, ServiceConfig config,
                      std::string prompt_template = std::string(kKeywordPromptTemplate))
        : poster_(std::move(transport), std::move(config)), template_(std::move(prompt_template)) {}

    KeywordResponse extract(const KeywordRequest& req) override {
        check_request(req);
        const json body = {{"prompt", render_prompt(template_, req)},
                           {"title", req.title},
                           {"abstract", req.abstract},
                           {"n_keywords", req.n_keywords}};
        const json reply = poster_.post(poster_.config().keyword_url, body);
        if (!reply.is_object() || !reply.contains("reply") || !reply["reply"].is_string()) {
            throw ContractError("keyword response lacks a string \"reply\": " + reply.dump());
        }
        return {parse_keyword_reply(reply["reply"].get<std::string>(), req.n_keywords)};
    }

  private:
    JsonPoster poster_;
    std::string template_;
};

}  // namespace revmatch::clients
