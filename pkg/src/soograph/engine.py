"""Engine facade: one loaded snapshot of store + index + citation graph,
plus the composite pseudo-relevance score.

Score modes (all config-tunable, see Config):

* plain search with query text:   total = bm_norm * (1 + cite_boost + read_boost)
  where bm_norm is BM25 normalized by the max over the candidate set,
  cite_boost = alpha*ln(1+citations), read_boost = beta*ln(1+reads90).
* query-less doc list (library, pure year/author filters):
  total = ln(1+citations) + ln(1+reads90).
* pure second-order output:       total = collation frequency (or raw BM25
  for the text-similarity operator).
* second-order output filtered by extra text terms:
  total = blend*freq_norm + (1-blend)*bm_norm, both normalized over the
  surviving candidate set.

After load/build the snapshot is immutable; evaluation is reentrant.
"""

from __future__ import annotations

import datetime as dt
import math
from collections import Counter
from pathlib import Path

from soograph.citegraph import CitationGraph
from soograph.config import Config
from soograph.readership import read_counts_window
from soograph.results import RankedEntry, RankedList, Score, sort_ranked
from soograph.store import CorpusStore
from soograph.textindex import SynonymTable, TextIndex


class Engine:
    def __init__(self, store: CorpusStore, config: Config | None = None):
        self.store = store
        self.config = config or Config()
        synonyms = SynonymTable()
        if self.config.synonyms_path:
            synonyms = SynonymTable.from_file(self.config.synonyms_path)
        self.index = TextIndex(self.config, synonyms).build(store)
        self.graph = CitationGraph.build(store)
        self._reads_cache: dict[dt.date, Counter] = {}

    @classmethod
    def load(cls, data_dir: str | Path, config: Config | None = None) -> "Engine":
        return cls(CorpusStore.load(data_dir), config)

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    def citation_count(self, doc_id: str) -> int:
        return self.graph.citation_count(doc_id)

    def reads_window(self, doc_id: str, now: dt.date) -> int:
        counts = self._reads_cache.get(now)
        if counts is None:
            counts = self._reads_cache[now] = read_counts_window(
                self.store.events, now, self.config.window_days)
        return counts.get(doc_id, 0)

    def pubdate(self, doc_id: str) -> str:
        return self.store.docs[doc_id].pubdate

    def first_author(self, doc_id: str) -> str:
        return self.store.docs[doc_id].first_author().casefold()

    # ------------------------------------------------------------------
    # Scoring
    # ------------------------------------------------------------------

    def queryless_score(self, doc_id: str, now: dt.date) -> Score:
        cite = math.log1p(self.citation_count(doc_id))
        read = math.log1p(self.reads_window(doc_id, now))
        return Score(total=cite + read, components={"bm25": 0.0, "freq": 0.0,
                                                    "cite_boost": cite, "read_boost": read})

    def plain_entries(self, doc_ids, tokens, now: dt.date) -> list[RankedEntry]:
        """Score a candidate set for a plain search (with query text)."""
        doc_ids = list(doc_ids)
        raw = {d: self.index.bm25(tokens, d) for d in doc_ids}
        top = max(raw.values(), default=0.0)
        entries = []
        for d in doc_ids:
            bm = raw[d] / top if top > 0 else 0.0
            cite = self.config.cite_alpha * math.log1p(self.citation_count(d))
            read = self.config.read_beta * math.log1p(self.reads_window(d, now))
            entries.append(RankedEntry(d, Score(
                total=bm * (1.0 + cite + read),
                components={"bm25": bm, "freq": 0.0, "cite_boost": cite, "read_boost": read})))
        return entries

    def ranked_plain(self, doc_ids, tokens, now: dt.date, origin: str = "search") -> RankedList:
        entries = self.plain_entries(doc_ids, tokens, now)
        entries = sort_ranked(entries, self.citation_count)
        return RankedList(entries, origin, query_tokens=tuple(tokens))

    def ranked_queryless(self, doc_ids, now: dt.date, origin: str = "search") -> RankedList:
        entries = [RankedEntry(d, self.queryless_score(d, now)) for d in doc_ids]
        entries = sort_ranked(entries, self.citation_count)
        return RankedList(entries, origin)

    def blend_rerank(self, base: RankedList, surviving_ids, tokens, now: dt.date) -> RankedList:
        """Re-rank a second-order output that was filtered by extra text terms:
        blend the native score (normalized) with BM25 of the filter tokens."""
        keep = set(surviving_ids)
        kept = [e for e in base.entries if e.doc_id in keep]
        max_native = max((e.score.total for e in kept), default=0.0)
        raw_bm = {e.doc_id: self.index.bm25(tokens, e.doc_id) for e in kept}
        max_bm = max(raw_bm.values(), default=0.0)
        w = self.config.blend
        entries = []
        for e in kept:
            freq_norm = e.score.total / max_native if max_native > 0 else 0.0
            bm_norm = raw_bm[e.doc_id] / max_bm if max_bm > 0 else 0.0
            entries.append(RankedEntry(e.doc_id, Score(
                total=w * freq_norm + (1.0 - w) * bm_norm,
                components={"bm25": bm_norm, "freq": freq_norm,
                            "cite_boost": 0.0, "read_boost": 0.0})))
        entries = sort_ranked(entries, self.citation_count)
        return RankedList(entries, base.origin, query_tokens=tuple(tokens))
