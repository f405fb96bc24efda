"""Tokenization and the inverted index over title/abstract/keywords.

BM25 follows the Okapi form with idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)).
Title term frequencies are multiplied by a configurable weight (default 2.0)
before scoring, so a hit in the title outranks the same hit in the abstract;
document length stays the unweighted total token count across all indexed
fields. The built index is immutable and safe for concurrent readers.
"""

from __future__ import annotations

import math
import re
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from soograph.config import Config
from soograph.errors import NotFoundError
from soograph.store import CorpusStore

FIELDS = ("title", "abstract", "keyword")

_TOKEN_RE = re.compile(r"[0-9a-z]+")


class SynonymTable:
    """Maps token variants onto a canonical token, applied at both index and
    query time (so e.g. nh3 and ammonia can be made interchangeable)."""

    def __init__(self, mapping: dict[str, str] | None = None):
        self.mapping = {k.lower(): v.lower() for k, v in (mapping or {}).items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "SynonymTable":
        """Parse one ``token=canonical`` pair per line; # comments allowed."""
        mapping: dict[str, str] = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            token, _, canonical = line.partition("=")
            if not canonical:
                raise ValueError(f"bad synonym line: {raw!r}")
            mapping[token.strip()] = canonical.strip()
        return cls(mapping)

    def canon(self, token: str) -> str:
        return self.mapping.get(token, token)


def tokenize(text: str, synonyms: SynonymTable | None = None) -> list[str]:
    """Lowercase and split on any non-alphanumeric character; digits kept."""
    tokens = _TOKEN_RE.findall(text.lower())
    if synonyms is not None and synonyms.mapping:
        tokens = [synonyms.canon(t) for t in tokens]
    return tokens


def idf(n_docs: int, df: int) -> float:
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


class TextIndex:
    """Inverted index with weighted term frequencies and per-field postings."""

    def __init__(self, config: Config | None = None, synonyms: SynonymTable | None = None):
        self.config = config or Config()
        self.synonyms = synonyms or SynonymTable()
        self.doc_ids: list[str] = []
        self.id_to_idx: dict[str, int] = {}
        self.n_docs = 0
        self.avg_len = 0.0
        self.doc_len: np.ndarray = np.zeros(0)
        # term -> (doc index array, weighted tf array), doc indexes ascending
        self.postings: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        # field -> term -> set of doc indexes (for field-restricted matching)
        self.field_postings: dict[str, dict[str, set[int]]] = {f: {} for f in FIELDS}
        # per-doc token tuples per field, for phrase verification and
        # pseudo-document construction
        self.doc_tokens: list[dict[str, tuple[str, ...]]] = []

    # ------------------------------------------------------------------
    # Build
    # ------------------------------------------------------------------

    def build(self, store: CorpusStore) -> "TextIndex":
        title_w = self.config.title_weight
        raw_postings: dict[str, dict[int, float]] = {}
        field_postings: dict[str, dict[str, set[int]]] = {f: {} for f in FIELDS}
        lengths: list[int] = []
        intern = sys.intern

        for idx, doc in enumerate(store.docs.values()):
            self.doc_ids.append(doc.id)
            self.id_to_idx[doc.id] = idx
            per_field: dict[str, tuple[str, ...]] = {}
            total_len = 0
            for fname, text, weight in (
                ("title", doc.title, title_w),
                ("abstract", doc.abstract, 1.0),
                ("keyword", " ".join(doc.keywords), 1.0),
            ):
                tokens = tuple(intern(t) for t in tokenize(text, self.synonyms))
                per_field[fname] = tokens
                total_len += len(tokens)
                fpost = field_postings[fname]
                for tok in tokens:
                    entry = raw_postings.get(tok)
                    if entry is None:
                        entry = raw_postings[tok] = {}
                    entry[idx] = entry.get(idx, 0.0) + weight
                    docset = fpost.get(tok)
                    if docset is None:
                        docset = fpost[tok] = set()
                    docset.add(idx)
            self.doc_tokens.append(per_field)
            lengths.append(total_len)

        self.n_docs = len(self.doc_ids)
        self.doc_len = np.asarray(lengths, dtype=np.float64)
        self.avg_len = float(self.doc_len.mean()) if self.n_docs else 0.0
        self.field_postings = field_postings
        for term, entry in raw_postings.items():
            idxs = np.fromiter(entry.keys(), dtype=np.int32, count=len(entry))
            tfs = np.fromiter(entry.values(), dtype=np.float64, count=len(entry))
            order = np.argsort(idxs)
            self.postings[term] = (idxs[order], tfs[order])
        return self

    # ------------------------------------------------------------------
    # Statistics
    # ------------------------------------------------------------------

    def df(self, term: str) -> int:
        entry = self.postings.get(term)
        return 0 if entry is None else len(entry[0])

    def idf(self, term: str) -> float:
        return idf(self.n_docs, self.df(term))

    # ------------------------------------------------------------------
    # Scoring
    # ------------------------------------------------------------------

    def _norm_query(self, tokens: Sequence[str]) -> list[str]:
        """Apply synonyms and drop duplicate query tokens, keeping order."""
        seen: set[str] = set()
        out = []
        for tok in tokens:
            tok = self.synonyms.canon(tok)
            if tok not in seen:
                seen.add(tok)
                out.append(tok)
        return out

    def bm25(self, query_tokens: Sequence[str], doc_id: str) -> float:
        """Okapi BM25 of one document against a bag of query tokens."""
        idx = self.id_to_idx.get(doc_id)
        if idx is None:
            raise NotFoundError("document", doc_id)
        k1, b = self.config.bm25_k1, self.config.bm25_b
        norm = k1 * (1.0 - b + b * float(self.doc_len[idx]) / self.avg_len)
        score = 0.0
        for term in self._norm_query(query_tokens):
            entry = self.postings.get(term)
            if entry is None:
                continue
            pos = int(np.searchsorted(entry[0], idx))
            if pos >= len(entry[0]) or entry[0][pos] != idx:
                continue
            tf = float(entry[1][pos])
            score += self.idf(term) * tf * (k1 + 1.0) / (tf + norm)
        return score

    def bm25_bulk(self, query_tokens: Sequence[str]) -> np.ndarray:
        """BM25 of every document against the query, as a dense array."""
        scores = np.zeros(self.n_docs, dtype=np.float64)
        if self.n_docs == 0:
            return scores
        k1, b = self.config.bm25_k1, self.config.bm25_b
        norms = k1 * (1.0 - b + b * self.doc_len / self.avg_len)
        for term in self._norm_query(query_tokens):
            entry = self.postings.get(term)
            if entry is None:
                continue
            idxs, tfs = entry
            w = self.idf(term)
            scores[idxs] += w * tfs * (k1 + 1.0) / (tfs + norms[idxs])
        return scores

    # ------------------------------------------------------------------
    # Matching
    # ------------------------------------------------------------------

    def docs_with_token(self, token: str, fields: Iterable[str] = FIELDS) -> set[int]:
        token = self.synonyms.canon(token)
        out: set[int] = set()
        for fname in fields:
            out |= self.field_postings[fname].get(token, set())
        return out

    def docs_with_phrase(self, tokens: Sequence[str], fields: Iterable[str] = FIELDS) -> set[int]:
        """Docs containing the tokens adjacently, in order, within one field."""
        tokens = [self.synonyms.canon(t) for t in tokens]
        if not tokens:
            return set()
        if len(tokens) == 1:
            return self.docs_with_token(tokens[0], fields)
        out: set[int] = set()
        for fname in fields:
            fpost = self.field_postings[fname]
            candidates: set[int] | None = None
            for tok in tokens:
                docset = fpost.get(tok, set())
                candidates = docset.copy() if candidates is None else candidates & docset
                if not candidates:
                    break
            if not candidates:
                continue
            first = tokens[0]
            rest = tokens[1:]
            for idx in candidates:
                seq = self.doc_tokens[idx][fname]
                for pos in range(len(seq) - len(rest)):
                    if seq[pos] == first and all(seq[pos + 1 + j] == t for j, t in enumerate(rest)):
                        out.add(idx)
                        break
        return out

    def abstract_tokens(self, doc_id: str) -> tuple[str, ...]:
        return self.doc_tokens[self.id_to_idx[doc_id]]["abstract"]
