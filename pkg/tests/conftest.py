import datetime as dt
import json

import pytest

from soograph.config import Config
from soograph.engine import Engine
from soograph.store import CorpusStore

D1 = "2000A......1....1A"
D2 = "2005B......1....1B"
D3 = "2010C......1....1C"
D4 = "2015D......1....1D"
D5 = "2020E......1....1E"

C5_RECORDS = [
    {"id": D1, "authors": ["adams, a"], "year": 2000, "references": []},
    {"id": D2, "authors": ["brown, b"], "year": 2005, "references": [D1]},
    {"id": D3, "authors": ["clark, c"], "year": 2010, "references": [D1, D2]},
    {"id": D4, "authors": ["davis, d"], "year": 2015, "references": [D1, D3]},
    {"id": D5, "authors": ["evans, e"], "year": 2020, "references": [D2, D3]},
]

R3_EVENTS = [
    {"reader": "r1", "doc": D1, "date": "2020-06-01"},
    {"reader": "r1", "doc": D2, "date": "2020-06-02"},
    {"reader": "r2", "doc": D1, "date": "2020-05-15"},
    {"reader": "r2", "doc": D3, "date": "2020-06-10"},
    {"reader": "r3", "doc": D2, "date": "2020-06-05"},
    {"reader": "r4", "doc": D1, "date": "2020-01-01"},
]

NOW = dt.date(2020, 6, 22)

T3_RECORDS = [
    {"id": "A", "abstract": "weak lensing survey", "year": 2001},
    {"id": "B", "abstract": "weak decay", "year": 2002},
    {"id": "C", "abstract": "galaxy survey", "year": 2003},
]


def make_store(records, events=(), data_dir=None) -> CorpusStore:
    store = CorpusStore(data_dir)
    store.ingest_documents(json.dumps(r) for r in records)
    if events:
        store.ingest_read_events(json.dumps(e) for e in events)
    return store


@pytest.fixture
def c5_store():
    return make_store(C5_RECORDS, R3_EVENTS)


@pytest.fixture(scope="session")
def c5_engine():
    store = make_store(C5_RECORDS, R3_EVENTS)
    return Engine(store, Config(min_docs=2))


@pytest.fixture(scope="session")
def t3_engine():
    return Engine(make_store(T3_RECORDS), Config(min_docs=2))
