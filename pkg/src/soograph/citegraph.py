"""Citation graph: forward/inverse reference links and the two classic
pairwise strengths (bibliometric coupling and co-citation).

References to ids outside the corpus never enter the graph; they live only
on the stored record. The graph is immutable once built.
"""

from __future__ import annotations

import logging

from soograph.errors import NotFoundError
from soograph.store import CorpusStore

logger = logging.getLogger(__name__)


class CitationGraph:
    def __init__(self):
        self.forward: dict[str, list[str]] = {}
        self.inverse: dict[str, list[str]] = {}
        self._ref_sets: dict[str, frozenset[str]] = {}

    @classmethod
    def build(cls, store: CorpusStore) -> "CitationGraph":
        graph = cls()
        for doc_id in store.docs:
            graph.forward[doc_id] = []
            graph.inverse[doc_id] = []
        for doc_id, doc in store.docs.items():
            known = [r for r in doc.references if r in store.docs]
            graph.forward[doc_id] = known
            graph._ref_sets[doc_id] = frozenset(known)
            for ref in known:
                graph.inverse[ref].append(doc_id)
        return graph

    def citation_count(self, doc_id: str) -> int:
        return len(self.inverse.get(doc_id, ()))

    def references_of(self, doc_ids) -> list[str]:
        """Union of the reference lists of the input docs, deduplicated.
        Unknown input ids are skipped with a warning (order of the result is
        the caller's concern; see soo.first_order_references for sorting)."""
        out: list[str] = []
        seen: set[str] = set()
        for doc_id in doc_ids:
            refs = self.forward.get(doc_id)
            if refs is None:
                logger.warning("references_of: skipping unknown id %s", doc_id)
                continue
            for ref in refs:
                if ref not in seen:
                    seen.add(ref)
                    out.append(ref)
        return out

    def citations_of(self, doc_ids) -> list[str]:
        """Union of the citing-doc lists of the input docs, deduplicated."""
        out: list[str] = []
        seen: set[str] = set()
        for doc_id in doc_ids:
            citers = self.inverse.get(doc_id)
            if citers is None:
                logger.warning("citations_of: skipping unknown id %s", doc_id)
                continue
            for citer in citers:
                if citer not in seen:
                    seen.add(citer)
                    out.append(citer)
        return out

    def coupling_strength(self, a: str, b: str) -> int:
        """Number of references the two docs share (symmetric)."""
        try:
            return len(self._ref_sets[a] & self._ref_sets[b])
        except KeyError as exc:
            raise NotFoundError("document", str(exc.args[0])) from None

    def cocitation_strength(self, a: str, b: str) -> int:
        """Number of docs whose reference lists contain both a and b."""
        if a not in self.inverse:
            raise NotFoundError("document", a)
        if b not in self.inverse:
            raise NotFoundError("document", b)
        return len(set(self.inverse[a]) & set(self.inverse[b]))
