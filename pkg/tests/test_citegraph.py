import pytest

from soograph.citegraph import CitationGraph
from soograph.errors import NotFoundError

from conftest import D1, D2, D3, D4, D5


@pytest.fixture
def graph(c5_store):
    return CitationGraph.build(c5_store)


def test_citation_counts(graph):
    assert [graph.citation_count(d) for d in (D1, D2, D3, D4, D5)] == [3, 2, 2, 0, 0]


def test_transpose_consistency(graph):
    for a in graph.forward:
        for b in graph.forward[a]:
            assert a in graph.inverse[b]
    for b in graph.inverse:
        for a in graph.inverse[b]:
            assert b in graph.forward[a]


def test_references_union(graph):
    assert set(graph.references_of([D3])) == {D1, D2}
    assert graph.references_of([D1]) == []
    assert set(graph.references_of([D4, D5])) == {D1, D2, D3}


def test_references_unknown_id_skipped(graph):
    assert set(graph.references_of(["ZZZ", D3])) == {D1, D2}


def test_citations_union(graph):
    assert set(graph.citations_of([D1])) == {D2, D3, D4}
    assert graph.citations_of([D5]) == []
    assert set(graph.citations_of([D1, D2])) == {D2, D3, D4, D5}


def test_coupling_strength(graph):
    assert graph.coupling_strength(D4, D5) == 1  # shared D3
    assert graph.coupling_strength(D1, D2) == 0
    assert graph.coupling_strength(D3, D3) == 2  # self-coupling = |refs|
    assert graph.coupling_strength(D4, D5) == graph.coupling_strength(D5, D4)
    with pytest.raises(NotFoundError):
        graph.coupling_strength(D1, "ZZZ")


def test_cocitation_strength(graph):
    assert graph.cocitation_strength(D1, D2) == 1  # D3 cites both
    assert graph.cocitation_strength(D4, D5) == 0
    assert graph.cocitation_strength(D2, D3) == 1  # D5
    assert graph.cocitation_strength(D2, D3) == graph.cocitation_strength(D3, D2)
    with pytest.raises(NotFoundError):
        graph.cocitation_strength("ZZZ", D1)


def test_synthetic_transpose_property():
    import json

    from soograph.store import CorpusStore
    from soograph.synth import SynthParams, generate

    doc_lines, _ = generate(SynthParams(n_docs=300, seed=11))
    store = CorpusStore()
    store.ingest_documents(doc_lines)
    graph = CitationGraph.build(store)
    for a, refs in graph.forward.items():
        for b in refs:
            assert a in graph.inverse[b]
    total_forward = sum(len(v) for v in graph.forward.values())
    total_inverse = sum(len(v) for v in graph.inverse.values())
    assert total_forward == total_inverse
    for d in store.docs:
        assert graph.citation_count(d) == len(graph.inverse[d])
