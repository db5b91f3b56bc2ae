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
"""Writes the 40-paper CLI fixture (raw corpus + benchmark) and prints the
statistics the CLI tests expect from it.

Usage: python3 cli_fixture.py [--write]
"""
import collections
import itertools
import json
import pathlib
import random
import sys

DATA = pathlib.Path(__file__).resolve().parent.parent / "data" / "cli"

TOPICS = [
    "graph neural message passing node edge embedding spectral convolution pooling readout",
    "protein folding structure residue sequence alignment contact backbone molecular docking",
    "reviewer assignment expertise retrieval ranking matching conference submission bidding",
    "speech recognition acoustic phoneme decoder transducer audio spectrogram vocoder prosody",
]
PEOPLE = [
    ("Ana Silva", "ana@lisboa.pt", "Universidade de Lisboa"),
    ("Bruno Costa", "bruno@lisboa.pt", "Universidade de Lisboa"),
    ("Chen Wei", "chen@tsinghua.cn", "Tsinghua University"),
    ("Dana Levi", "dana@weizmann.il", "Weizmann Institute"),
    ("Emre Kaya", "emre@metu.tr", "METU"),
    ("Farah Ali", "farah@kaust.sa", "KAUST"),
    ("Goran Ilic", "goran@etf.rs", "University of Belgrade"),
    ("Hana Sato", "hana@utokyo.jp", "University of Tokyo"),
]


def make():
    rng = random.Random(40)
    records = []
    first_mention = {}
    for i in range(40):
        topic = i % 4
        words = TOPICS[topic].split()
        pid = f"2403.{i + 1:05d}"
        lead = 2 * topic + (i // 4) % 2
        authors = [lead]
        if i % 3 == 0:
            authors.append(lead ^ 1)
        if i % 7 == 0:
            authors.append((lead + 2) % 8)
        rec = {
            "id": pid,
            "title": " ".join(rng.sample(words, 3)).title(),
            "abstract": " ".join(rng.choice(words) for _ in range(12)) + " shared method results",
            "authors": [{"name": PEOPLE[a][0], "email": PEOPLE[a][1], "affiliation": PEOPLE[a][2]} for a in authors],
            "last_revised": f"2024-{1 + i % 12:02d}-{1 + i % 27:02d}",
            "subarea": ["LG", "q-bio", "IR", "CL"][topic],
        }
        records.append(rec)
        for k, a in enumerate(authors):
            mid = f"{pid}#{k}"
            first_mention[a] = min(first_mention.get(a, mid), mid)
    bench = []
    for i in range(0, 40, 4):
        pid = records[i + (i // 4) % 4]["id"]
        topic = (i + (i // 4) % 4) % 4
        for a in range(8):
            if (a + i) % 3 == 0:
                continue
            rating = 5 if a // 2 == topic else 1 + (a + i) % 3
            bench.append({"paper_id": pid, "reviewer_id": "author:" + first_mention[a], "rating": rating})
    return records, bench


def pair_count(rows, key, item):
    groups = collections.defaultdict(dict)
    for r in rows:
        groups[r[key]][r[item]] = r["rating"]
    return sum(x != y for g in groups.values() for x, y in itertools.combinations(g.values(), 2))


if __name__ == "__main__":
    records, bench = make()
    if "--write" in sys.argv:
        (DATA / "corpus40.jsonl").write_text("".join(json.dumps(r) + "\n" for r in records))
        (DATA / "bench.jsonl").write_text("".join(json.dumps(r) + "\n" for r in bench))
    ratings = collections.Counter(r["rating"] for r in bench)
    print("records", len(bench), "ratings", [ratings[k] for k in range(1, 6)])
    print("pairs", pair_count(bench, "paper_id", "reviewer_id"), pair_count(bench, "reviewer_id", "paper_id"))
    print("mentions", sum(len(r["authors"]) for r in records))
