"""Corpus store: documents, read events, and saved libraries.

The store is a single directory (``docs.jsonl``, ``reads.jsonl``,
``libraries/<name>``) loaded into an in-memory working set. Ingestion
requires exclusive access; afterwards the store is treated as immutable and
is safe for any number of concurrent readers.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import IO, Iterable, Iterator

from soograph.errors import NotFoundError

logger = logging.getLogger(__name__)

DOC_KEYS = (
    "id", "title", "abstract", "authors", "affiliations", "orcids", "year",
    "pubdate", "entry_date", "bibstem", "keywords", "collections",
    "properties", "references",
)


@dataclass
class Document:
    """One bibliographic record. ``references`` may name ids that are not in
    the corpus; those stay on the record but are ignored by every operator."""

    id: str
    title: str = ""
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    affiliations: list[str] = field(default_factory=list)
    orcids: list[str] = field(default_factory=list)
    year: int = 0
    pubdate: str = ""        # YYYY-MM
    entry_date: str = ""     # YYYY-MM-DD
    bibstem: str = ""
    keywords: list[str] = field(default_factory=list)
    collections: list[str] = field(default_factory=list)
    properties: list[str] = field(default_factory=list)
    references: list[str] = field(default_factory=list)

    def first_author(self) -> str:
        return self.authors[0] if self.authors else ""

    def to_record(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ReadEvent:
    reader_id: str
    doc_id: str
    date: dt.date


@dataclass
class Library:
    name: str
    doc_ids: list[str]
    created: str


@dataclass
class CorpusStats:
    n_docs: int = 0
    n_reference_edges: int = 0
    n_dangling_refs: int = 0
    n_read_events: int = 0
    n_warnings: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def _dedup(items: Iterable[str]) -> list[str]:
    """Drop duplicates, keeping first occurrence order."""
    seen: set[str] = set()
    out: list[str] = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def parse_date(text: str) -> dt.date:
    return dt.date.fromisoformat(text)


def _normalize_record(raw: dict) -> Document:
    """Validate and normalize one ingestion record. Raises ValueError."""
    doc_id = str(raw.get("id") or "")
    if not doc_id:
        raise ValueError("missing id")
    year = int(raw.get("year") or 0)
    if not 1500 <= year <= 3000:
        raise ValueError(f"year out of range: {year}")
    authors = [str(a) for a in raw.get("authors") or []]
    affiliations = [str(a) for a in raw.get("affiliations") or []]
    # authors and affiliations stay parallel; pad the short side with ""
    while len(affiliations) < len(authors):
        affiliations.append("")
    pubdate = str(raw.get("pubdate") or "") or f"{year:04d}-01"
    return Document(
        id=doc_id,
        title=str(raw.get("title") or ""),
        abstract=str(raw.get("abstract") or ""),
        authors=authors,
        affiliations=affiliations,
        orcids=[str(o) for o in raw.get("orcids") or []],
        year=year,
        pubdate=pubdate,
        entry_date=str(raw.get("entry_date") or ""),
        bibstem=str(raw.get("bibstem") or ""),
        keywords=[str(k) for k in raw.get("keywords") or []],
        collections=[str(c) for c in raw.get("collections") or []],
        properties=[str(p) for p in raw.get("properties") or []],
        references=_dedup(str(r) for r in raw.get("references") or []),
    )


class CorpusStore:
    """In-memory corpus with optional file persistence under ``data_dir``."""

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.docs: dict[str, Document] = {}
        self.events: list[ReadEvent] = []

    # ------------------------------------------------------------------
    # Ingestion
    # ------------------------------------------------------------------

    def ingest_documents(self, lines: Iterable[str]) -> CorpusStats:
        """Ingest line-delimited JSON document records.

        Malformed lines are skipped with a logged warning; duplicate ids are
        resolved last-wins (re-ingestion replaces the record). Returns the
        stats of the whole store after ingestion.
        """
        warnings = 0
        for lineno, line in enumerate(lines, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                doc = _normalize_record(raw)
            except (ValueError, TypeError, KeyError) as exc:
                warnings += 1
                logger.warning("skipping document line %d: %s", lineno, exc)
                continue
            if doc.id in self.docs:
                warnings += 1
                logger.warning("duplicate id %s at line %d: last record wins", doc.id, lineno)
            self.docs[doc.id] = doc
        self._persist_docs()
        return self.stats(n_warnings=warnings)

    def ingest_read_events(self, lines: Iterable[str]) -> CorpusStats:
        """Ingest line-delimited JSON read events (keys reader, doc, date).

        Events are append-only; events naming unknown docs are retained (they
        simply never match anything). Bad dates skip the record.
        """
        warnings = 0
        for lineno, line in enumerate(lines, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                event = ReadEvent(
                    reader_id=str(raw["reader"]),
                    doc_id=str(raw["doc"]),
                    date=parse_date(str(raw["date"])),
                )
            except (ValueError, TypeError, KeyError) as exc:
                warnings += 1
                logger.warning("skipping read event line %d: %s", lineno, exc)
                continue
            self.events.append(event)
        self._persist_events()
        return self.stats(n_warnings=warnings)

    def ingest_document_file(self, path: str | Path) -> CorpusStats:
        with open(path, encoding="utf-8") as fh:
            return self.ingest_documents(fh)

    def ingest_read_event_file(self, path: str | Path) -> CorpusStats:
        with open(path, encoding="utf-8") as fh:
            return self.ingest_read_events(fh)

    # ------------------------------------------------------------------
    # Lookup
    # ------------------------------------------------------------------

    def get_document(self, doc_id: str) -> Document:
        try:
            return self.docs[doc_id]
        except KeyError:
            raise NotFoundError("document", doc_id) from None

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.docs

    def __len__(self) -> int:
        return len(self.docs)

    def known_references(self, doc_id: str) -> list[str]:
        """References of a doc restricted to ids present in the corpus."""
        return [r for r in self.docs[doc_id].references if r in self.docs]

    def stats(self, n_warnings: int = 0) -> CorpusStats:
        n_edges = 0
        n_dangling = 0
        for doc in self.docs.values():
            for ref in doc.references:
                if ref in self.docs:
                    n_edges += 1
                else:
                    n_dangling += 1
        return CorpusStats(
            n_docs=len(self.docs),
            n_reference_edges=n_edges,
            n_dangling_refs=n_dangling,
            n_read_events=len(self.events),
            n_warnings=n_warnings,
        )

    # ------------------------------------------------------------------
    # Libraries
    # ------------------------------------------------------------------

    def _libraries_dir(self) -> Path:
        if self.data_dir is None:
            raise NotFoundError("library directory", "<no data dir>")
        return self.data_dir / "libraries"

    def save_library(self, name: str, doc_ids: Iterable[str]) -> Library:
        if not name or "/" in name or name != name.strip():
            raise ValueError(f"library name is not path-safe: {name!r}")
        lib = Library(name=name, doc_ids=_dedup(doc_ids),
                      created=dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"))
        libdir = self._libraries_dir()
        libdir.mkdir(parents=True, exist_ok=True)
        (libdir / name).write_text("".join(f"{d}\n" for d in lib.doc_ids), encoding="utf-8")
        return lib

    def load_library(self, name: str) -> Library:
        path = self._libraries_dir() / name
        if not path.is_file():
            raise NotFoundError("library", name)
        ids = [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        return Library(name=name, doc_ids=_dedup(ids),
                       created=dt.datetime.fromtimestamp(path.stat().st_mtime,
                                                         dt.timezone.utc).isoformat(timespec="seconds"))

    def list_libraries(self) -> list[str]:
        libdir = self._libraries_dir()
        if not libdir.is_dir():
            return []
        return sorted(p.name for p in libdir.iterdir() if p.is_file())

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    def _persist_docs(self) -> None:
        if self.data_dir is None:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        tmp = self.data_dir / "docs.jsonl.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            for doc in self.docs.values():
                fh.write(json.dumps(doc.to_record(), sort_keys=True) + "\n")
        tmp.replace(self.data_dir / "docs.jsonl")

    def _persist_events(self) -> None:
        if self.data_dir is None:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        tmp = self.data_dir / "reads.jsonl.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            for ev in self.events:
                fh.write(json.dumps({"reader": ev.reader_id, "doc": ev.doc_id,
                                     "date": ev.date.isoformat()}) + "\n")
        tmp.replace(self.data_dir / "reads.jsonl")

    @classmethod
    def load(cls, data_dir: str | Path) -> "CorpusStore":
        """Load a previously persisted store directory."""
        store = cls(data_dir)
        docs_path = store.data_dir / "docs.jsonl"
        reads_path = store.data_dir / "reads.jsonl"
        if docs_path.is_file():
            with open(docs_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        doc = _normalize_record(json.loads(line))
                        store.docs[doc.id] = doc
        if reads_path.is_file():
            with open(reads_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        raw = json.loads(line)
                        store.events.append(ReadEvent(str(raw["reader"]), str(raw["doc"]),
                                                      parse_date(str(raw["date"]))))
        return store
