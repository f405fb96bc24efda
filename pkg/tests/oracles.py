"""Naive reference implementations used as independent oracles.

Everything here works on raw record dicts and event tuples with direct
quadratic scans — no index, no graph, no shared code with the engine — so
agreement between an operator and its oracle is meaningful.
"""

from __future__ import annotations

import datetime as dt
import itertools
from collections import Counter


def known_refs(records: dict[str, dict], doc_id: str) -> list[str]:
    seen = set()
    out = []
    for r in records[doc_id].get("references", []):
        if r in records and r not in seen:
            seen.add(r)
            out.append(r)
    return out


def citation_counts(records: dict[str, dict]) -> dict[str, int]:
    counts = {d: 0 for d in records}
    for d in records:
        for r in known_refs(records, d):
            counts[r] += 1
    return counts


def rank(counts: Counter, cites: dict[str, int]) -> list[tuple[str, int]]:
    """Order by count desc, then citation count desc, then id asc."""
    return sorted(counts.items(), key=lambda kv: (-kv[1], -cites[kv[0]], kv[0]))


def naive_useful(records: dict[str, dict], inner_ids) -> list[tuple[str, int]]:
    counts: Counter = Counter()
    for d in inner_ids:
        for r in known_refs(records, d):
            counts[r] += 1
    return rank(counts, citation_counts(records))


def naive_reviews(records: dict[str, dict], inner_ids) -> list[tuple[str, int]]:
    inner = set(inner_ids)
    counts: Counter = Counter()
    for d in records:
        overlap = len([r for r in known_refs(records, d) if r in inner])
        if overlap:
            counts[d] = overlap
    return rank(counts, citation_counts(records))


def naive_active_readers(events, now: dt.date, window_days: int, min_docs: int,
                         max_docs: int) -> dict[str, set[str]]:
    start = now - dt.timedelta(days=window_days)
    per_reader: dict[str, set[str]] = {}
    for reader, doc, date in events:
        if start < date <= now:
            per_reader.setdefault(reader, set()).add(doc)
    return {r: docs for r, docs in per_reader.items() if min_docs <= len(docs) <= max_docs}


def naive_trending(records, events, inner_ids, now, window_days, min_docs,
                   max_docs) -> list[tuple[str, int]]:
    inner = set(inner_ids)
    counts: Counter = Counter()
    for docs in naive_active_readers(events, now, window_days, min_docs, max_docs).values():
        if docs & inner:
            for d in docs:
                counts[d] += 1
    return rank(counts, citation_counts(records))


def naive_topn(records, events, entries, n, sort_key, direction, now,
               window_days) -> list[str]:
    """entries: list of (doc_id, score_total). Returns the top-n ids."""
    cites = citation_counts(records)
    start = now - dt.timedelta(days=window_days)
    reads = Counter(doc for _, doc, date in events if start < date <= now)

    def first_author(doc_id):
        authors = records[doc_id].get("authors") or []
        return authors[0].casefold() if authors else ""

    def pubdate(doc_id):
        rec = records[doc_id]
        return rec.get("pubdate") or f"{rec.get('year', 0):04d}-01"

    keys = {
        "score": lambda e: e[1],
        "citation_count": lambda e: cites[e[0]],
        "read_count": lambda e: reads.get(e[0], 0),
        "date": lambda e: pubdate(e[0]),
        "first_author": lambda e: first_author(e[0]),
    }
    ordered = sorted(entries, key=lambda e: e[0])
    ordered = sorted(ordered, key=lambda e: cites[e[0]], reverse=True)
    ordered = sorted(ordered, key=keys[sort_key], reverse=(direction == "desc"))
    return [e[0] for e in ordered[:n]]


def naive_match(record: dict, node) -> bool:
    """Scan-style matcher for filter queries (AND-distribution oracle)."""
    from soograph import query as q
    from soograph.textindex import tokenize

    if isinstance(node, q.Term) or isinstance(node, q.Phrase):
        tokens = tokenize(node.text)
        fields = [tokenize(record.get("title", "")), tokenize(record.get("abstract", "")),
                  tokenize(" ".join(record.get("keywords", [])))]
        if len(tokens) == 1:
            return any(tokens[0] in f for f in fields)
        return any(_subseq(tokens, f) for f in fields)
    if isinstance(node, q.YearRange):
        return node.lo <= record.get("year", 0) <= node.hi
    if isinstance(node, q.Field):
        if node.name == "bibcode":
            return record["id"] == node.value
        if node.name == "author":
            import re
            want = re.sub(r"\s*,\s*", ",", node.value.casefold())
            authors = record.get("authors") or []
            pool = authors[:1] if node.anchored else authors
            return any(re.sub(r"\s*,\s*", ",", a.casefold()).startswith(want) for a in pool)
        if node.name == "bibstem":
            return record.get("bibstem", "").casefold() == node.value.casefold()
        if node.name == "property":
            return node.value.casefold() in [p.casefold() for p in record.get("properties", [])]
        if node.name == "collection":
            return node.value.casefold() in [c.casefold() for c in record.get("collections", [])]
        raise NotImplementedError(node.name)
    if isinstance(node, q.And):
        return all(naive_match(record, c) for c in node.children)
    if isinstance(node, q.Or):
        return any(naive_match(record, c) for c in node.children)
    if isinstance(node, q.Not):
        return not naive_match(record, node.child)
    raise NotImplementedError(type(node))


def _subseq(needle, haystack):
    k = len(needle)
    return any(haystack[i:i + k] == needle for i in range(len(haystack) - k + 1))


# ----------------------------------------------------------------------
# Partition enumeration for the community-detection oracle
# ----------------------------------------------------------------------

def all_partitions(items: list):
    """Every set partition of items (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in all_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def best_modularity(nodes: list, edges: list[tuple]) -> float:
    """Brute-force maximum modularity over all partitions (independent
    formula: Q = sum_ij (A_ij - k_i k_j / 2m) delta(c_i c_j) / 2m)."""
    two_m = sum(w for _, _, w in edges) * 2.0
    if two_m == 0:
        return 0.0
    adj = {(a, b): 0.0 for a, b in itertools.product(nodes, nodes)}
    degree = {n: 0.0 for n in nodes}
    for a, b, w in edges:
        adj[(a, b)] += w
        adj[(b, a)] += w
        degree[a] += w
        degree[b] += w
    best = -1.0
    for partition in all_partitions(nodes):
        score = 0.0
        for group in partition:
            for a in group:
                for b in group:
                    score += adj[(a, b)] - degree[a] * degree[b] / two_m
        best = max(best, score / two_m)
    return best
