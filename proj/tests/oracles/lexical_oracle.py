# Copyright 2026 The revmatch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Formula-direct BM25 and TF-IDF scores for the lexical unit-test fixtures."""
import math
import re

K1, B = 1.2, 0.75

DOCS = {
    "d1": "graph neural networks for molecule property prediction",
    "d2": "graph retrieval with dense embeddings and graph pruning",
    "d3": "protein folding prediction with deep networks",
    "d4": "reviewer assignment by expertise retrieval",
    "d5": "a short note",
}
QUERIES = ["graph networks", "retrieval expertise graph", "prediction", "unseen words"]


def tokenize(s):
    return [t for t in re.split(r"[^\w]+|_", s.lower()) if len(t) >= 2]


def bm25(query, docs):
    toks = {k: tokenize(v) for k, v in docs.items()}
    n = len(toks)
    avg = sum(len(t) for t in toks.values()) / n
    out = {}
    for d, t in toks.items():
        s = 0.0
        for q in tokenize(query):
            tf = t.count(q)
            if tf == 0:
                continue
            df = sum(1 for x in toks.values() if q in x)
            idf = math.log(1 + (n - df + 0.5) / (df + 0.5))
            s += idf * tf * (K1 + 1) / (tf + K1 * (1 - B + B * len(t) / avg))
        out[d] = s
    return out


def tfidf_cos(a, b, docs):
    toks = [set(tokenize(v)) for v in docs.values()]
    n = len(toks)
    vocab = set().union(*toks)

    def vec(s):
        tf = {}
        for t in tokenize(s):
            if t in vocab:
                tf[t] = tf.get(t, 0) + 1
        return {t: math.log(1 + c) * math.log(1 + n / sum(1 for x in toks if t in x)) for t, c in tf.items()}

    va, vb = vec(a), vec(b)
    dot = sum(w * vb.get(t, 0.0) for t, w in va.items())
    na = math.sqrt(sum(w * w for w in va.values()))
    nb = math.sqrt(sum(w * w for w in vb.values()))
    return 0.0 if na == 0 or nb == 0 else dot / (na * nb)


if __name__ == "__main__":
    print("single_doc", repr(bm25("alpha", {"x": "alpha"})["x"]))
    for q in QUERIES:
        s = bm25(q, DOCS)
        print(q, {k: repr(v) for k, v in s.items()})
    print("tfidf d1 d2", repr(tfidf_cos(DOCS["d1"], DOCS["d2"], DOCS)))
    print("tfidf d1 d3", repr(tfidf_cos(DOCS["d1"], DOCS["d3"], DOCS)))
    print("tfidf q d4", repr(tfidf_cos("expertise retrieval for reviewers", DOCS["d4"], DOCS)))
