"""The four second-order operators plus topn and the paired first-order
operators.

Each second-order operator takes a ranked list, truncates it to the inner
cap (200 by default; re-sorting by the operator's default sort only when the
list is over the cap), collates a neighbourhood of the surviving docs, and
returns a new ranked list. Inner docs are removed from the output only by
the text-similarity operator. All operators are pure functions over the
immutable engine snapshot.
"""

from __future__ import annotations

import datetime as dt
from collections import Counter
from dataclasses import dataclass

from soograph.engine import Engine
from soograph.errors import InvalidArgumentError
from soograph.readership import co_read_counts
from soograph.results import RankedEntry, RankedList, Score, sort_ranked
from soograph.textindex import tokenize

SOO_KINDS = ("useful", "reviews", "trending", "similar")

TOPN_MAX = 1000


@dataclass(frozen=True)
class SortSpec:
    key: str = "score"          # score | citation_count | read_count | date | first_author
    direction: str = "desc"

    def __str__(self) -> str:
        return f"{self.key} {self.direction}"


def _freq_entries(counts: Counter) -> list[RankedEntry]:
    return [RankedEntry(d, Score(total=float(c), components={"freq": float(c)}))
            for d, c in counts.items()]


def inner_truncate(engine: Engine, inner: RankedList, op_kind: str, now: dt.date) -> RankedList:
    """Cap the inner list for a second-order operator.

    At or under the cap the list passes through untouched. Over the cap it is
    re-sorted by the operator's default sort (citation count for reviews,
    the entries' scores otherwise) and cut to the cap.
    """
    cap = engine.config.soo_cap
    if len(inner) <= cap:
        return inner
    if op_kind == "reviews":
        entries = sort_ranked(inner.entries, engine.citation_count,
                              key=lambda e: engine.citation_count(e.doc_id))
    else:
        entries = sort_ranked(inner.entries, engine.citation_count)
    return RankedList(entries[:cap], inner.origin, inner.query_tokens)


def op_useful(engine: Engine, inner: RankedList) -> RankedList:
    """Collate the reference lists of the inner docs; rank each referenced
    doc by how many inner docs cite it. Inner docs are not removed."""
    counts: Counter = Counter()
    for doc_id in inner.ids():
        counts.update(engine.graph.forward.get(doc_id, ()))
    entries = sort_ranked(_freq_entries(counts), engine.citation_count)
    return RankedList(entries, "useful")


def op_reviews(engine: Engine, inner: RankedList) -> RankedList:
    """Rank every doc citing at least one inner doc by how many inner docs
    it cites (its coupling with the inner set)."""
    inner_ids = inner.ids()
    counts: Counter = Counter()
    for doc_id in inner_ids:
        counts.update(engine.graph.inverse.get(doc_id, ()))
    entries = sort_ranked(_freq_entries(counts), engine.citation_count)
    return RankedList(entries, "reviews")


def op_trending(engine: Engine, inner: RankedList, now: dt.date) -> RankedList:
    """Rank docs by how many active readers of the inner set read them
    within the window."""
    counts = co_read_counts(engine.store.events, inner.ids(), now, engine.config)
    entries = sort_ranked(_freq_entries(counts), engine.citation_count)
    return RankedList(entries, "trending")


def _top_terms(engine: Engine, token_counts: Counter) -> list[str]:
    """Pick the pseudo-document's query terms by tf*idf, ties by token."""
    scored = [(tf * engine.index.idf(tok), tok)
              for tok, tf in token_counts.items() if engine.index.df(tok) > 0]
    scored.sort(key=lambda x: (-x[0], x[1]))
    return [tok for _, tok in scored[:engine.config.similar_terms]]


def op_similar(engine: Engine, inner: RankedList | None, now: dt.date,
               raw_text: str | None = None) -> RankedList:
    """Rank every corpus doc by BM25 against a pseudo-document built from the
    inner docs' abstracts (list mode, inner docs removed) or from raw text
    (raw mode, nothing removed)."""
    if raw_text is not None:
        if not raw_text.strip():
            raise InvalidArgumentError("similar: empty input text")
        counts = Counter(tokenize(raw_text, engine.index.synonyms))
        excluded: set[str] = set()
    else:
        assert inner is not None
        counts = Counter()
        for doc_id in inner.ids():
            counts.update(engine.index.abstract_tokens(doc_id))
        excluded = inner.id_set()
    terms = _top_terms(engine, counts)
    if not terms:
        return RankedList([], "similar")
    scores = engine.index.bm25_bulk(terms)
    entries = []
    for idx in scores.nonzero()[0]:
        doc_id = engine.index.doc_ids[idx]
        if doc_id in excluded:
            continue
        bm = float(scores[idx])
        entries.append(RankedEntry(doc_id, Score(total=bm, components={"bm25": bm})))
    entries = sort_ranked(entries, engine.citation_count)
    return RankedList(entries, "similar")


def op_topn(engine: Engine, n: int, inner: RankedList, sort: SortSpec,
            now: dt.date) -> RankedList:
    """Re-sort by the requested key (standard tie-break) and keep the top n."""
    if not 1 <= n <= TOPN_MAX:
        raise InvalidArgumentError(f"topn: n must be in [1, {TOPN_MAX}], got {n}")
    keys = {
        "score": lambda e: e.score.total,
        "citation_count": lambda e: float(engine.citation_count(e.doc_id)),
        "read_count": lambda e: float(engine.reads_window(e.doc_id, now)),
        "date": lambda e: engine.pubdate(e.doc_id),
        "first_author": lambda e: engine.first_author(e.doc_id),
    }
    try:
        key = keys[sort.key]
    except KeyError:
        raise InvalidArgumentError(f"topn: unknown sort key {sort.key!r}") from None
    entries = sort_ranked(inner.entries, engine.citation_count, key=key,
                          descending=(sort.direction == "desc"))
    return RankedList(entries[:n], "topn", inner.query_tokens)


def first_order_references(engine: Engine, doc_ids, now: dt.date) -> RankedList:
    """Union of reference lists, alphabetical by first-author name. No cap:
    first-order operators always process and return full lists."""
    ids = engine.graph.references_of(doc_ids)
    ids.sort(key=lambda d: (engine.first_author(d), d))
    entries = [RankedEntry(d, engine.queryless_score(d, now)) for d in ids]
    return RankedList(entries, "references")


def first_order_citations(engine: Engine, doc_ids, now: dt.date) -> RankedList:
    """Union of citing-doc lists, newest publication date first. No cap."""
    ids = engine.graph.citations_of(doc_ids)
    ids.sort(key=lambda d: d)
    ids.sort(key=lambda d: engine.pubdate(d), reverse=True)
    entries = [RankedEntry(d, engine.queryless_score(d, now)) for d in ids]
    return RankedList(entries, "citations")
