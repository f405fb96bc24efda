import math

import pytest
from hypothesis import given, strategies as st

from soograph.config import Config
from soograph.engine import Engine
from soograph.errors import NotFoundError
from soograph.textindex import SynonymTable, idf, tokenize

from conftest import make_store

# Independently derived from the closed formula with N=3, df=2, tf=1, len=3,
# avglen=7/3, k1=1.2, b=0.75: idf = ln(1.6), tf term = 2.2 / (86/35) = 77/86.
BM25_WEAK_A = 77.0 * math.log(8.0 / 5.0) / 86.0


def test_tokenize_splits_on_non_alphanumerics():
    assert tokenize("Weak-Lensing survey") == ["weak", "lensing", "survey"]
    assert tokenize("") == []
    assert tokenize("NH3 at 10.5um") == ["nh3", "at", "10", "5um"]


def test_tokenize_applies_synonyms():
    table = SynonymTable({"nh3": "ammonia"})
    assert tokenize("NH3", table) == ["ammonia"]


def test_synonym_file_roundtrip(tmp_path):
    path = tmp_path / "syn"
    path.write_text("# sample\nnh3=ammonia\n")
    assert SynonymTable.from_file(path).canon("nh3") == "ammonia"


def test_t3_index_stats(t3_engine):
    index = t3_engine.index
    assert index.n_docs == 3
    assert index.df("weak") == 2
    assert index.df("survey") == 2
    assert index.df("lensing") == 1
    assert index.avg_len == pytest.approx(7 / 3)


def test_empty_corpus_index():
    engine = Engine(make_store([]))
    assert engine.index.n_docs == 0
    assert list(engine.index.bm25_bulk(["weak"])) == []


def test_bm25_fixture_value(t3_engine):
    assert t3_engine.index.bm25(["weak"], "A") == pytest.approx(BM25_WEAK_A, abs=1e-12)


def test_bm25_absent_term_zero(t3_engine):
    assert t3_engine.index.bm25(["lensing"], "B") == 0.0


def test_bm25_shorter_doc_scores_higher(t3_engine):
    assert t3_engine.index.bm25(["weak"], "B") > t3_engine.index.bm25(["weak"], "A")


def test_bm25_unknown_doc(t3_engine):
    with pytest.raises(NotFoundError):
        t3_engine.index.bm25(["weak"], "ZZZ")


def test_bm25_bulk_matches_single(t3_engine):
    bulk = t3_engine.index.bm25_bulk(["weak", "survey"])
    for doc_id in ("A", "B", "C"):
        idx = t3_engine.index.id_to_idx[doc_id]
        assert bulk[idx] == pytest.approx(t3_engine.index.bm25(["weak", "survey"], doc_id))


def test_title_tokens_weighted():
    records = [
        {"id": "T", "title": "lensing", "abstract": "filler words here", "year": 2000},
        {"id": "B", "title": "", "abstract": "lensing filler words", "year": 2000},
        {"id": "C", "title": "", "abstract": "galaxy filler words", "year": 2000},
    ]
    engine = Engine(make_store(records), Config(title_weight=2.0))
    # same document length, same idf; the title occurrence carries tf 2.0
    assert engine.index.bm25(["lensing"], "T") > engine.index.bm25(["lensing"], "B")


@given(st.integers(min_value=1, max_value=10**6))
def test_idf_closed_form(n):
    df = max(1, n // 3)
    assert idf(n, df) == pytest.approx(math.log(1 + (n - df + 0.5) / (df + 0.5)), abs=1e-9)


@given(st.integers(min_value=1, max_value=50), st.integers(min_value=1, max_value=50),
       st.floats(min_value=0.5, max_value=5.0))
def test_bm25_monotone_in_tf(tf_low, bump, norm):
    # holding the length normalization fixed, raising tf never lowers the term score
    k1 = 1.2
    tf_high = tf_low + bump
    low = tf_low * (k1 + 1) / (tf_low + k1 * norm)
    high = tf_high * (k1 + 1) / (tf_high + k1 * norm)
    assert high >= low


def test_phrase_requires_adjacency_in_one_field():
    records = [
        {"id": "X", "abstract": "dark matter halo", "year": 2000},
        {"id": "Y", "abstract": "dark energy and matter", "year": 2000},
        {"id": "Z", "title": "dark", "abstract": "matter", "year": 2000},
    ]
    engine = Engine(make_store(records))
    hits = engine.index.docs_with_phrase(["dark", "matter"])
    assert {engine.index.doc_ids[i] for i in hits} == {"X"}
