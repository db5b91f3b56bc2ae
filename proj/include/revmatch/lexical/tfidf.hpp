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
#include <string_view>

#include "revmatch/lexical/bm25.hpp"

namespace revmatch::lexical {

/// idf used by the TF-IDF baseline: ln(1 + N / df). Positive for every
/// in-vocabulary term, so a text is always at cosine 1 with itself.
inline double tfidf_idf(const Bm25Index& index, const std::string& term) {
    const auto df = static_cast<double>(index.document_frequency(term));
    return std::log(1.0 + static_cast<double>(index.doc_count()) / df);
}

/// Sparse ln(1 + tf) * idf vector over the index vocabulary.
inline std::map<std::string, double> tfidf_vector(const Bm25Index& index, std::string_view body) {
    std::map<std::string, int> tf;
    for (auto& t : tokenize(body)) {
        if (index.in_vocabulary(t)) ++tf[t];
    }
    std::map<std::string, double> v;
    for (const auto& [term, count] : tf) v[term] = std::log1p(static_cast<double>(count)) * tfidf_idf(index, term);
    return v;
}

/// Cosine of the TF-IDF vectors of two texts, with idf from `index`; 0 when
/// either text has no in-vocabulary token.
inline double tfidf_cosine(const Bm25Index& index, std::string_view a, std::string_view b) {
    const auto va = tfidf_vector(index, a);
    const auto vb = tfidf_vector(index, b);
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [t, w] : va) {
        na += w * w;
        const auto it = vb.find(t);
        if (it != vb.end()) dot += w * it->second;
    }
    for (const auto& [_, w] : vb) nb += w * w;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace revmatch::lexical
