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
"""Writes the 50-record synthetic benchmark fixture and prints its hand-countable
statistics (rating histogram, per-panel histograms, derived pair counts).

Usage: python3 benchmark_fixture.py [--write]
"""
import collections
import itertools
import json
import pathlib
import random
import sys

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "benchmark" / "synthetic50.jsonl"


def make():
    rng = random.Random(2026)
    papers = [f"2402.{i:05d}" for i in range(1, 13)]
    annotators = [f"ann{i:02d}" for i in range(1, 15)]
    seen = set()
    rows = []
    while len(rows) < 50:
        a = rng.choice(annotators)
        p = rng.choice(papers)
        if (p, a) in seen:
            continue
        per_a = sum(1 for r in rows if r["reviewer_id"] == a)
        per_p = sum(1 for r in rows if r["paper_id"] == p)
        if per_a >= 6 or per_p >= 6:
            continue
        seen.add((p, a))
        rows.append({"paper_id": p, "reviewer_id": a, "rating": rng.randint(1, 5)})
    return rows


def pair_count(rows, key, item):
    groups = collections.defaultdict(dict)
    for r in rows:
        groups[r[key]][r[item]] = r["rating"]
    n = 0
    for g in groups.values():
        for x, y in itertools.combinations(g.values(), 2):
            n += x != y
    return n


if __name__ == "__main__":
    rows = make()
    if "--write" in sys.argv:
        OUT.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    ratings = collections.Counter(r["rating"] for r in rows)
    per_ann = collections.Counter(collections.Counter(r["reviewer_id"] for r in rows).values())
    per_pap = collections.Counter(collections.Counter(r["paper_id"] for r in rows).values())
    print("records", len(rows))
    print("ratings", [ratings[k] for k in range(1, 6)])
    print("papers_per_annotator", [per_ann[k] for k in range(1, 7)])
    print("annotators_per_paper", [per_pap[k] for k in range(1, 7)])
    print("annotators", len({r["reviewer_id"] for r in rows}), "papers", len({r["paper_id"] for r in rows}))
    print("pairs paper_centric", pair_count(rows, "paper_id", "reviewer_id"))
    print("pairs reviewer_centric", pair_count(rows, "reviewer_id", "paper_id"))
