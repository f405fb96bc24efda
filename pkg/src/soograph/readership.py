"""Active-reader filtering and co-read collation over the read-event log.

A reader is "active" when their count of distinct docs read inside the
window falls within [min_docs, max_docs]; activity is defined over distinct
docs, not raw events, so page reloads do not inflate it. Profiles are always
re-derived from the reference time, never cached across different nows.
"""

from __future__ import annotations

import datetime as dt
from collections import Counter
from dataclasses import dataclass, field

from soograph.config import Config
from soograph.store import ReadEvent


@dataclass
class ReaderProfile:
    reader_id: str
    docs: set[str] = field(default_factory=set)
    n_events: int = 0


def window_start(now: dt.date, window_days: int) -> dt.date:
    return now - dt.timedelta(days=window_days)


def active_readers(events: list[ReadEvent], now: dt.date, config: Config) -> dict[str, ReaderProfile]:
    """Profiles of readers active in (now - window_days, now]."""
    start = window_start(now, config.window_days)
    profiles: dict[str, ReaderProfile] = {}
    for ev in events:
        if start < ev.date <= now:
            prof = profiles.get(ev.reader_id)
            if prof is None:
                prof = profiles[ev.reader_id] = ReaderProfile(ev.reader_id)
            prof.docs.add(ev.doc_id)
            prof.n_events += 1
    return {
        rid: prof
        for rid, prof in profiles.items()
        if config.min_docs <= len(prof.docs) <= config.max_docs
    }


def co_read_counts(events: list[ReadEvent], doc_ids, now: dt.date, config: Config) -> Counter:
    """For each doc, the number of active readers of the input set who also
    read it inside the window. Readers qualify when their window docs
    intersect the input set."""
    targets = set(doc_ids)
    counts: Counter = Counter()
    for prof in active_readers(events, now, config).values():
        if prof.docs & targets:
            counts.update(prof.docs)
    return counts


def read_counts_window(events: list[ReadEvent], now: dt.date, window_days: int) -> Counter:
    """Raw per-doc read-event counts within (now - window_days, now]."""
    start = window_start(now, window_days)
    counts: Counter = Counter()
    for ev in events:
        if start < ev.date <= now:
            counts[ev.doc_id] += 1
    return counts
