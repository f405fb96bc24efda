"""Deterministic synthetic corpus + read-log generator.

Emits exactly the store ingestion formats, so generated streams can be fed
straight into ingestion. Citations target strictly earlier-year docs,
sampled proportional to (1 + in-degree)^pa_exponent inside topic-biased
candidate pools; abstracts draw from per-topic unigram vocabularies; read
events cluster on recent docs of each reader's preferred topic and fall in
the 120 days ending on December 31 of the last corpus year (use that date
as the reference time when querying trends on a generated corpus).

Everything is driven by integer draws from one seeded generator, so output
is byte-identical across runs and platforms.
"""

from __future__ import annotations

import datetime as dt
import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import random

TOPIC_STEMS = ("flux", "halo", "disk", "wave", "dust", "core", "jet", "ring", "arc", "void")
COMMON_WORDS = ("galaxy", "survey", "model", "data", "analysis", "observation",
                "spectrum", "mass", "energy", "field", "method", "result",
                "sample", "measurement", "cluster")
BIBSTEMS = ("ApJ", "MNRAS", "AJ", "arXiv", "PhRvD")


@dataclass
class SynthParams:
    n_docs: int = 100
    n_topics: int = 5
    refs_mean: float = 5.0
    pa_exponent: float = 1.0
    n_readers: int = 20
    reads_mean: float = 8.0
    year_span: tuple[int, int] = (1990, 2020)
    seed: int = 0


def anchor_date(params: SynthParams) -> dt.date:
    """The natural reference time for a generated corpus."""
    return dt.date(params.year_span[1], 12, 31)


def _count_around(rng: random.Random, mean: float) -> int:
    """Uniform integer on [0, 2*mean]; expectation equals mean."""
    top = int(round(2 * mean))
    return rng.randrange(top + 1) if top > 0 else 0


def generate(params: SynthParams) -> tuple[list[str], list[str]]:
    """Produce (document lines, read-event lines) as JSONL strings."""
    rng = random.Random(params.seed)
    lo, hi = params.year_span
    if lo > hi:
        raise ValueError("year_span reversed")
    n_years = hi - lo + 1
    n_topics = max(1, params.n_topics)

    topic_vocab = [[f"{stem}{t}" for stem in TOPIC_STEMS] for t in range(n_topics)]
    author_pool = [f"author{k:04d}, {chr(97 + k % 26)}" for k in range(max(3, params.n_docs // 3))]

    years = [lo + (i * n_years) // params.n_docs for i in range(params.n_docs)]
    topics = [rng.randrange(n_topics) for _ in range(params.n_docs)]
    ids = [f"{years[i]}Synt.{i:06d}...{chr(65 + i % 26)}" for i in range(params.n_docs)]

    # citable pools per topic: docs from strictly earlier years; with
    # pa_exponent 1.0 an urn (one entry per doc plus one per citation
    # received) realizes preferential attachment with O(1) draws
    urns: list[list[int]] = [[] for _ in range(n_topics)]
    pools: list[list[int]] = [[] for _ in range(n_topics)]
    indegree = [0] * params.n_docs
    pending: list[int] = []
    pending_year = years[0] if years else lo
    use_urn = params.pa_exponent == 1.0

    def flush_pending(upto_year: int) -> None:
        nonlocal pending, pending_year
        if pending and pending_year < upto_year:
            for j in pending:
                urns[topics[j]].append(j)
                pools[topics[j]].append(j)
            pending = []

    def sample_ref(own_topic: int) -> int | None:
        topic = own_topic if rng.randrange(10) < 8 else rng.randrange(n_topics)
        if not pools[topic]:
            nonempty = [t for t in range(n_topics) if pools[t]]
            if not nonempty:
                return None
            topic = nonempty[rng.randrange(len(nonempty))]
        if use_urn:
            urn = urns[topic]
            return urn[rng.randrange(len(urn))]
        pool = pools[topic]
        weights = [int(round(1000 * (1 + indegree[j]) ** params.pa_exponent)) for j in pool]
        cumulative = []
        acc = 0
        for w in weights:
            acc += w
            cumulative.append(acc)
        pick = rng.randrange(acc)
        return pool[bisect_right(cumulative, pick)]

    doc_lines: list[str] = []
    topic_docs: list[list[int]] = [[] for _ in range(n_topics)]
    for i in range(params.n_docs):
        year, topic = years[i], topics[i]
        if year != pending_year:
            flush_pending(year)
            pending_year = year
        vocab = topic_vocab[topic]

        refs: list[str] = []
        chosen: set[int] = set()
        want = _count_around(rng, params.refs_mean)
        attempts = 0
        while len(chosen) < want and attempts < want * 8 + 8:
            attempts += 1
            j = sample_ref(topic)
            if j is None:
                break
            if j in chosen:
                continue
            chosen.add(j)
            refs.append(ids[j])
            indegree[j] += 1
            if use_urn:
                urns[topics[j]].append(j)

        def words(count: int) -> list[str]:
            out = []
            for _ in range(count):
                if rng.randrange(5) < 3:
                    out.append(vocab[rng.randrange(len(vocab))])
                else:
                    out.append(COMMON_WORDS[rng.randrange(len(COMMON_WORDS))])
            return out

        month = 1 + rng.randrange(12)
        n_authors = 1 + rng.randrange(3)
        authors = []
        seen_authors: set[int] = set()
        while len(authors) < n_authors:
            k = rng.randrange(len(author_pool))
            if k not in seen_authors:
                seen_authors.add(k)
                authors.append(author_pool[k])
        record = {
            "id": ids[i],
            "title": " ".join(words(4 + rng.randrange(5))),
            "abstract": " ".join(words(30 + rng.randrange(31))),
            "authors": authors,
            "affiliations": [f"inst{rng.randrange(20):02d} university" for _ in authors],
            "orcids": [],
            "year": year,
            "pubdate": f"{year:04d}-{month:02d}",
            "entry_date": f"{year:04d}-{month:02d}-{1 + rng.randrange(28):02d}",
            "bibstem": BIBSTEMS[rng.randrange(len(BIBSTEMS))],
            "keywords": [vocab[rng.randrange(len(vocab))] for _ in range(2 + rng.randrange(2))],
            "collections": ["astronomy"] if rng.randrange(10) < 8 else ["physics"],
            "properties": ["refereed"] if rng.randrange(10) < 7 else [],
            "references": refs,
        }
        doc_lines.append(json.dumps(record))
        topic_docs[topic].append(i)
        pending.append(i)

    anchor = anchor_date(params)
    read_lines: list[str] = []
    for r in range(params.n_readers):
        reader_id = f"r{r:04d}"
        preferred = rng.randrange(n_topics)
        for _ in range(_count_around(rng, params.reads_mean)):
            topic = preferred if rng.randrange(10) < 8 else rng.randrange(n_topics)
            docs = topic_docs[topic]
            if not docs:
                continue
            recent_from = (3 * len(docs)) // 4
            j = docs[recent_from + rng.randrange(len(docs) - recent_from)]
            date = anchor - dt.timedelta(days=rng.randrange(120))
            read_lines.append(json.dumps({"reader": reader_id, "doc": ids[j],
                                          "date": date.isoformat()}))
    return doc_lines, read_lines


def write_files(params: SynthParams, docs_path: str | Path,
                reads_path: str | Path | None = None) -> None:
    doc_lines, read_lines = generate(params)
    Path(docs_path).write_text("".join(line + "\n" for line in doc_lines), encoding="utf-8")
    if reads_path is not None:
        Path(reads_path).write_text("".join(line + "\n" for line in read_lines), encoding="utf-8")
