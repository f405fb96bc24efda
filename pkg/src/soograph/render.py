"""Shared result serialization for the CLI and the HTTP API.

Both surfaces must emit identical entries (ids and scores byte-for-byte for
the same query/now/store), so they both go through entries_payload.
"""

from __future__ import annotations

from soograph.engine import Engine
from soograph.results import RankedList


def entries_payload(engine: Engine, ranked: RankedList, rows: int | None = None) -> list[dict]:
    entries = ranked.entries if rows is None else ranked.entries[:rows]
    payload = []
    for e in entries:
        doc = engine.store.docs.get(e.doc_id)
        payload.append({
            "id": e.doc_id,
            "score": e.score.total,
            "components": e.score.components,
            "title": doc.title if doc else "",
            "year": doc.year if doc else 0,
            "first_author": doc.first_author() if doc else "",
        })
    return payload


def query_payload(engine: Engine, canonical: str, ranked: RankedList,
                  rows: int | None = None) -> dict:
    return {
        "query": canonical,
        "n_total": len(ranked),
        "entries": entries_payload(engine, ranked, rows),
    }


def format_table(engine: Engine, ranked: RankedList, limit: int) -> str:
    lines = [f"{'score':>10}  {'cites':>5}  {'year':>4}  id / title"]
    for e in ranked.entries[:limit]:
        doc = engine.store.docs.get(e.doc_id)
        title = (doc.title[:60] if doc else "")
        year = doc.year if doc else 0
        cites = engine.citation_count(e.doc_id)
        lines.append(f"{e.score.total:10.4f}  {cites:5d}  {year:4d}  {e.doc_id}  {title}")
    if len(ranked) > limit:
        lines.append(f"... {len(ranked) - limit} more (of {len(ranked)})")
    return "\n".join(lines)
