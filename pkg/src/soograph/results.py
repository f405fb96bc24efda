"""Ranked result lists: the universal operator input/output.

Every operator output is a RankedList. Score-sorted origins order entries
descending by Score.total with the one global tie-break used everywhere:
citation count descending, then doc id ascending. The first-order origins
(references, citations) keep their own documented orders instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable


@dataclass
class Score:
    total: float = 0.0
    components: dict[str, float] = field(default_factory=dict)


@dataclass
class RankedEntry:
    doc_id: str
    score: Score


@dataclass
class RankedList:
    entries: list[RankedEntry] = field(default_factory=list)
    origin: str = "search"
    # query tokens that produced this list, kept for score-sorted truncation
    query_tokens: tuple[str, ...] = ()

    def ids(self) -> list[str]:
        return [e.doc_id for e in self.entries]

    def id_set(self) -> set[str]:
        return {e.doc_id for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def sort_ranked(entries: Iterable[RankedEntry], citation_count: Callable[[str], int],
                key: Callable[[RankedEntry], float] | None = None,
                descending: bool = True) -> list[RankedEntry]:
    """Sort entries by a primary key (Score.total by default) with the
    standard tie-break. The tie-break direction is fixed regardless of the
    primary direction."""
    primary = key or (lambda e: e.score.total)
    entries = list(entries)
    # python sorts are stable; apply keys least significant first
    entries.sort(key=lambda e: e.doc_id)
    entries.sort(key=lambda e: citation_count(e.doc_id), reverse=True)
    entries.sort(key=primary, reverse=descending)
    return entries
