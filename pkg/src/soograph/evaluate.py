"""Bottom-up query evaluation.

Leaves resolve to candidate id sets (exact set semantics); operator calls
truncate their inner list and run the operator. An AND that combines an
operator result with plain filters keeps the operator's ranking unless one
of the filters carries text, in which case the result is re-ranked by the
score blend (see Engine). A NOT against an operator result is a pure id-set
difference that preserves the left side's order and scores — restricting by
year/author never changes scores, only adding text terms does.
"""

from __future__ import annotations

import datetime as dt
import re

from soograph import query as q
from soograph import soo
from soograph.engine import Engine
from soograph.errors import EvaluationError
from soograph.results import RankedList
from soograph.textindex import tokenize

_TEXT_FIELDS = {
    "full": ("title", "abstract", "keyword"),
    "abs": ("abstract",),
    "title": ("title",),
    "keyword": ("keyword",),
}


def _norm_author(name: str) -> str:
    return re.sub(r"\s*,\s*", ",", name.casefold().strip())


def resolve_date_expr(expr: str, now: dt.date) -> dt.date | None:
    """Resolve *, NOW, NOW-nDAYS, or an ISO date. None means open-ended."""
    if expr == "*":
        return None
    upper = expr.upper()
    if upper == "NOW":
        return now
    match = re.fullmatch(r"NOW-(\d+)DAYS", upper)
    if match:
        return now - dt.timedelta(days=int(match.group(1)))
    return dt.date.fromisoformat(expr)


def has_op(node) -> bool:
    if isinstance(node, (q.OpCall, q.TopN, q.Docs)):
        return True
    if isinstance(node, (q.And, q.Or)):
        return any(has_op(c) for c in node.children)
    if isinstance(node, q.Not):
        return has_op(node.child)
    return False


def text_tokens(node, synonyms) -> list[str]:
    """Query tokens contributing to text relevance: bare terms, phrases, and
    text-field values. Negated and operator-internal text is excluded."""
    if isinstance(node, (q.Term, q.Phrase)):
        return tokenize(node.text, synonyms)
    if isinstance(node, q.Field) and node.name in _TEXT_FIELDS:
        return tokenize(node.value, synonyms)
    if isinstance(node, (q.And, q.Or)):
        out: list[str] = []
        for child in node.children:
            out.extend(text_tokens(child, synonyms))
        return out
    return []


class Evaluator:
    def __init__(self, engine: Engine, now: dt.date):
        self.engine = engine
        self.now = now

    # ------------------------------------------------------------------
    # Filter semantics: node -> doc-id set
    # ------------------------------------------------------------------

    def field_search(self, node) -> set[str]:
        engine = self.engine
        store = engine.store
        index = engine.index

        if isinstance(node, (q.Term, q.Phrase)):
            return self._text_match(node.text, ("title", "abstract", "keyword"))
        if isinstance(node, q.YearRange):
            return {d for d, doc in store.docs.items() if node.lo <= doc.year <= node.hi}
        if isinstance(node, q.DateRange):
            lo = resolve_date_expr(node.lo, self.now)
            hi = resolve_date_expr(node.hi, self.now)
            out = set()
            for d, doc in store.docs.items():
                if not doc.entry_date:
                    continue
                try:
                    entered = dt.date.fromisoformat(doc.entry_date)
                except ValueError:
                    continue
                if (lo is None or lo <= entered) and (hi is None or entered <= hi):
                    out.add(d)
            return out
        if isinstance(node, q.Field):
            return self._field_match(node)
        if isinstance(node, q.Not):
            return set(store.docs) - self.field_search(node.child)
        if isinstance(node, q.Or):
            out = set()
            for child in node.children:
                out |= self.field_search(child)
            return out
        if isinstance(node, q.And):
            positives = [c for c in node.children if not isinstance(c, q.Not)]
            negatives = [c.child for c in node.children if isinstance(c, q.Not)]
            if positives:
                result = self.field_search(positives[0])
                for child in positives[1:]:
                    result &= self.field_search(child)
            else:
                result = set(store.docs)
            for child in negatives:
                result -= self.field_search(child)
            return result
        raise EvaluationError(f"not a filter node: {node!r}")

    def _text_match(self, text: str, fields) -> set[str]:
        index = self.engine.index
        tokens = tokenize(text, index.synonyms)
        if not tokens:
            return set()
        if len(tokens) == 1:
            idxs = index.docs_with_token(tokens[0], fields)
        else:
            # multi-token values (quoted phrases, hyphenated compounds)
            # require adjacency within a single field
            idxs = index.docs_with_phrase(tokens, fields)
        return {index.doc_ids[i] for i in idxs}

    def _field_match(self, node: q.Field) -> set[str]:
        store = self.engine.store
        name, value = node.name, node.value
        if name in _TEXT_FIELDS:
            return self._text_match(value, _TEXT_FIELDS[name])
        if name == "bibcode":
            return {value} if value in store.docs else set()
        if name == "bibstem":
            want = value.casefold()
            return {d for d, doc in store.docs.items() if doc.bibstem.casefold() == want}
        if name == "author":
            want = _norm_author(value)
            out = set()
            for d, doc in store.docs.items():
                candidates = doc.authors[:1] if node.anchored else doc.authors
                if any(_norm_author(a).startswith(want) for a in candidates):
                    out.add(d)
            return out
        if name == "inst":
            want = value.casefold()
            return {d for d, doc in store.docs.items()
                    if any(want in aff.casefold() for aff in doc.affiliations)}
        if name == "orcid":
            return {d for d, doc in store.docs.items() if value in doc.orcids}
        if name == "property":
            want = value.casefold()
            return {d for d, doc in store.docs.items()
                    if want in (p.casefold() for p in doc.properties)}
        if name == "collection":
            want = value.casefold()
            return {d for d, doc in store.docs.items()
                    if want in (c.casefold() for c in doc.collections)}
        raise EvaluationError(f"unhandled field: {name}")

    # ------------------------------------------------------------------
    # Full evaluation: node -> RankedList
    # ------------------------------------------------------------------

    def evaluate(self, node) -> RankedList:
        engine = self.engine
        if not has_op(node):
            ids = self.field_search(node)
            tokens = text_tokens(node, engine.index.synonyms)
            if tokens:
                return engine.ranked_plain(ids, tokens, self.now)
            return engine.ranked_queryless(ids, self.now)

        if isinstance(node, q.Docs):
            library = engine.store.load_library(node.library)
            known = [d for d in library.doc_ids if d in engine.store.docs]
            return engine.ranked_queryless(known, self.now, origin="docs")

        if isinstance(node, q.TopN):
            inner = self.evaluate(node.child)
            return soo.op_topn(engine, node.n, inner, node.sort, self.now)

        if isinstance(node, q.OpCall):
            if node.kind == "similar" and node.raw_text is not None:
                return soo.op_similar(engine, None, self.now, raw_text=node.raw_text)
            inner = self.evaluate(node.child)
            if node.kind == "references":
                return soo.first_order_references(engine, inner.ids(), self.now)
            if node.kind == "citations":
                return soo.first_order_citations(engine, inner.ids(), self.now)
            inner = soo.inner_truncate(engine, inner, node.kind, self.now)
            if node.kind == "useful":
                return soo.op_useful(engine, inner)
            if node.kind == "reviews":
                return soo.op_reviews(engine, inner)
            if node.kind == "trending":
                return soo.op_trending(engine, inner, self.now)
            if node.kind == "similar":
                return soo.op_similar(engine, inner, self.now)
            raise EvaluationError(f"unknown operator: {node.kind}")

        if isinstance(node, q.And):
            return self._eval_and(node)

        if isinstance(node, q.Or):
            ids: set[str] = set()
            for child in node.children:
                if has_op(child):
                    ids |= self.evaluate(child).id_set()
                else:
                    ids |= self.field_search(child)
            tokens = [t for c in node.children if not has_op(c)
                      for t in text_tokens(c, engine.index.synonyms)]
            if tokens:
                return engine.ranked_plain(ids, tokens, self.now)
            return engine.ranked_queryless(ids, self.now)

        if isinstance(node, q.Not):
            # a lone negation: complement under the filter semantics
            ids = set(engine.store.docs) - self.evaluate(node.child).id_set()
            return engine.ranked_queryless(ids, self.now)

        raise EvaluationError(f"cannot evaluate node: {node!r}")

    def _eval_and(self, node: q.And) -> RankedList:
        engine = self.engine
        positives = [c for c in node.children if not isinstance(c, q.Not)]
        negatives = [c.child for c in node.children if isinstance(c, q.Not)]

        base: RankedList | None = None
        filter_sets: list[set[str]] = []
        filter_tokens: list[str] = []
        extra_op_sets: list[set[str]] = []
        for child in positives:
            if has_op(child):
                result = self.evaluate(child)
                if base is None:
                    base = result
                else:
                    extra_op_sets.append(result.id_set())
            else:
                filter_sets.append(self.field_search(child))
                filter_tokens.extend(text_tokens(child, engine.index.synonyms))

        negative_ids: set[str] = set()
        for child in negatives:
            if has_op(child):
                negative_ids |= self.evaluate(child).id_set()
            else:
                negative_ids |= self.field_search(child)

        if base is None:
            # operators appear only under negation; score the filter side
            if filter_sets:
                ids = set.intersection(*filter_sets)
            else:
                ids = set(engine.store.docs)
            ids -= negative_ids
            if filter_tokens:
                return engine.ranked_plain(ids, filter_tokens, self.now)
            return engine.ranked_queryless(ids, self.now)

        surviving = base.id_set()
        for s in extra_op_sets:
            surviving &= s
        for s in filter_sets:
            surviving &= s
        surviving -= negative_ids

        if filter_tokens:
            return engine.blend_rerank(base, surviving, filter_tokens, self.now)
        kept = [e for e in base.entries if e.doc_id in surviving]
        return RankedList(kept, base.origin, base.query_tokens)


def evaluate(engine: Engine, query_text: str, now: dt.date) -> RankedList:
    """Parse and evaluate a query string against one engine snapshot."""
    ast = q.parse(query_text)
    return Evaluator(engine, now).evaluate(ast)
