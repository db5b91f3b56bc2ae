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
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revmatch/clients/transport.hpp"
#include "revmatch/corpus/types.hpp"
#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::clients {

enum class Verdict { Merge, Distinct };

/// Raised by a verifier that cannot give an answer; disambiguation treats it
/// as "distinct" for that pair.
class VerifierUnavailable : public ExternalError {
  public:
    using ExternalError::ExternalError;
};

/// Decides whether two same-name mentions with different affiliations refer
/// to one person.
class SemanticVerifier {
  public:
    virtual ~SemanticVerifier() = default;
    virtual Verdict verify(const corpus::AuthorMention& a, const corpus::AuthorMention& b) = 0;
};

/// Deterministic offline verifier comparing institutions by acronym, by
/// corporate-suffix-stripped name, or by containment of a distinctive core.
class StubVerifier : public SemanticVerifier {
  public:
    Verdict verify(const corpus::AuthorMention& a, const corpus::AuthorMention& b) override {
        return same_institution(a.affiliation, b.affiliation) ? Verdict::Merge : Verdict::Distinct;
    }

    static bool same_institution(std::string_view x, std::string_view y) {
        const auto tx = core_tokens(x);
        const auto ty = core_tokens(y);
        if (tx.empty() || ty.empty()) return false;
        if (tx == ty) return true;
        if (is_acronym_of(tx, ty) || is_acronym_of(ty, tx)) return true;
        const auto& small = tx.size() <= ty.size() ? tx : ty;
        const auto& large = tx.size() <= ty.size() ? ty : tx;
        const std::set<std::string> large_set(large.begin(), large.end());
        bool distinctive = false;
        for (const auto& t : small) {
            if (large_set.count(t) == 0) return false;
            if (!is_generic(t)) distinctive = true;
        }
        return distinctive;
    }

  private:
    static bool is_dropped(std::string_view t) {
        static const std::set<std::string_view> dropped = {
            "of", "the", "and", "for", "at", "de", "dept", "department", "inc", "group", "ltd",
            "corp", "corporation", "co", "llc", "gmbh", "company"};
        return dropped.count(t) != 0;
    }

    static bool is_generic(std::string_view t) {
        static const std::set<std::string_view> generic = {
            "university", "institute", "college", "school", "faculty", "lab", "laboratory", "research",
            "center", "centre", "technology", "science", "sciences", "cs", "computer", "engineering"};
        return generic.count(t) != 0;
    }

    static std::vector<std::string> core_tokens(std::string_view s) {
        std::vector<std::string> out;
        for (auto& t : text::tokenize(s)) {
            if (!is_dropped(t)) out.push_back(std::move(t));
        }
        return out;
    }

    // "mit" vs {"massachusetts", "institute", "technology"}
    static bool is_acronym_of(const std::vector<std::string>& acronym, const std::vector<std::string>& full) {
        if (acronym.size() != 1 || full.size() < 2) return false;
        std::string initials;
        for (const auto& t : full) initials.push_back(t.front());
        return initials == acronym.front();
    }
};

/// Sends a two-instance clustering prompt and expects {"clusters": [[1, 2]]}
/// (merge) or {"clusters": [[1], [2]]} (distinct).
class HttpVerifier : public SemanticVerifier {
  public:
    HttpVerifier(std::shared_ptr<Transport> transport, ServiceConfig config)
        : poster_(std::move(transport), std::move(config)) {}

    Verdict verify(const corpus::AuthorMention& a, const corpus::AuthorMention& b) override {
        const json instances = json::array({
            {{"id", 1}, {"name", a.name}, {"affiliation", a.affiliation}},
            {{"id", 2}, {"name", b.name}, {"affiliation", b.affiliation}},
        });
        json reply;
        try {
            reply = poster_.post(poster_.config().verifier_url, {{"instances", instances}});
        } catch (const ExternalError& e) {
            throw VerifierUnavailable(e.what());
        } catch (const UsageError& e) {
            throw VerifierUnavailable(e.what());
        }
        if (!reply.is_object() || !reply.contains("clusters") || !reply["clusters"].is_array()) {
            throw VerifierUnavailable("verifier reply lacks \"clusters\": " + reply.dump());
        }
        for (const auto& cluster : reply["clusters"]) {
            if (!cluster.is_array()) continue;
            bool has1 = false;
            bool has2 = false;
            for (const auto& id : cluster) {
                if (!id.is_number_integer()) continue;
                has1 = has1 || id.get<int>() == 1;
                has2 = has2 || id.get<int>() == 2;
            }
            if (has1 && has2) return Verdict::Merge;
        }
        return Verdict::Distinct;
    }

  private:
    JsonPoster poster_;
};

}  // namespace revmatch::clients
