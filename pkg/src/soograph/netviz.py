"""Paper and author networks: construction, Louvain clustering, cluster
labeling by log-likelihood-ratio keywords, and export (DOT/GraphML/JSON).

Edges in a paper network carry bibliometric coupling strength (number of
shared references); in an author network, the number of listed docs two
authors share. Exports are byte-stable for a fixed input so golden-file
tests and repeated server responses stay identical.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from soograph.engine import Engine
from soograph.errors import InvalidArgumentError
from soograph.results import RankedList


@dataclass
class Network:
    nodes: list[str]
    edges: list[tuple[str, str, float]]          # canonical a < b, weight >= 1
    node_labels: dict[str, str] = field(default_factory=dict)
    partition: dict[str, int] = field(default_factory=dict)
    labels: dict[int, list[str]] = field(default_factory=dict)


@dataclass
class Partition:
    assignment: dict[str, int]
    modularity: float


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------

def build_paper_network(engine: Engine, ranked: RankedList, max_nodes: int = 100,
                        min_weight: float = 1) -> Network:
    """Graph over the first max_nodes entries; coupling strength >= min_weight
    makes an edge. Isolated nodes are kept."""
    nodes = ranked.ids()[:max_nodes]
    edges = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            w = engine.graph.coupling_strength(a, b)
            if w >= min_weight:
                lo, hi = (a, b) if a < b else (b, a)
                edges.append((lo, hi, float(w)))
    edges.sort()
    node_labels = {}
    for doc_id in nodes:
        doc = engine.store.docs[doc_id]
        author = doc.first_author().split(",")[0] if doc.authors else doc_id
        node_labels[doc_id] = f"{author} ({doc.year})" if doc.year else author
    return Network(nodes, edges, node_labels)


def build_author_network(engine: Engine, ranked: RankedList) -> Network:
    """Graph over the author strings of the listed docs; edge weight is the
    number of listed docs both authors appear on."""
    nodes: list[str] = []
    seen: set[str] = set()
    pair_counts: Counter = Counter()
    author_docs: dict[str, list[str]] = {}
    for doc_id in ranked.ids():
        authors = []
        for a in engine.store.docs[doc_id].authors:
            if a not in seen:
                seen.add(a)
                nodes.append(a)
            author_docs.setdefault(a, []).append(doc_id)
            authors.append(a)
        uniq = sorted(set(authors))
        for i, a in enumerate(uniq):
            for b in uniq[i + 1:]:
                pair_counts[(a, b)] += 1
    edges = sorted((a, b, float(w)) for (a, b), w in pair_counts.items())
    net = Network(nodes, edges, {a: a for a in nodes})
    net.author_docs = author_docs  # type: ignore[attr-defined]
    return net


# ----------------------------------------------------------------------
# Louvain community detection
# ----------------------------------------------------------------------

def modularity(nodes: list, edges: list[tuple], assignment: dict, resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a partition. Zero for edgeless graphs."""
    two_m = 0.0
    tot: dict[int, float] = {}
    internal: dict[int, float] = {}
    degree: dict = {n: 0.0 for n in nodes}
    for a, b, w in edges:
        degree[a] += w
        degree[b] += w
        two_m += 2.0 * w
        if assignment[a] == assignment[b]:
            internal[assignment[a]] = internal.get(assignment[a], 0.0) + 2.0 * w
    if two_m == 0:
        return 0.0
    for n in nodes:
        c = assignment[n]
        tot[c] = tot.get(c, 0.0) + degree[n]
    score = 0.0
    for c, t in tot.items():
        score += internal.get(c, 0.0) / two_m - resolution * (t / two_m) ** 2
    return score


def louvain(network: Network, seed: int = 0, resolution: float = 1.0) -> Partition:
    """Standard Louvain: seeded-shuffle local moving plus graph aggregation,
    stopping once a full level gains no modularity (> 1e-9). Deterministic
    for a fixed (graph, seed). Final community ids are dense, numbered by
    first appearance in the node list."""
    rng = random.Random(seed)
    n = len(network.nodes)
    node_index = {node: i for i, node in enumerate(network.nodes)}

    # adjacency with both directions; self-loops (from aggregation) carry 2w
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for a, b, w in network.edges:
        ia, ib = node_index[a], node_index[b]
        adj[ia].append((ib, w))
        adj[ib].append((ia, w))

    # membership[i] = community of supernode i; leaf_community maps original
    # nodes through every aggregation level
    leaf_community = list(range(n))

    while True:
        size = len(adj)
        degree = [sum(w for _, w in adj[i]) for i in range(size)]
        two_m = sum(degree)
        if two_m == 0:
            break
        community = list(range(size))
        tot = degree[:]
        improved_level = False

        while True:
            moved = False
            order = list(range(size))
            rng.shuffle(order)
            for i in order:
                ci = community[i]
                ki = degree[i]
                # weights from i to each neighbouring community (loops excluded)
                links: dict[int, float] = {}
                self_w = 0.0
                for j, w in adj[i]:
                    if j == i:
                        self_w += w
                    else:
                        links[community[j]] = links.get(community[j], 0.0) + w
                tot[ci] -= ki
                best_c, best_gain = ci, links.get(ci, 0.0) - resolution * tot[ci] * ki / two_m
                for c, k_in in sorted(links.items()):
                    if c == ci:
                        continue
                    gain = k_in - resolution * tot[c] * ki / two_m
                    if gain > best_gain + 1e-12:
                        best_c, best_gain = c, gain
                tot[best_c] += ki
                if best_c != ci:
                    community[i] = best_c
                    moved = True
                    # gain is in units of 2m*dQ/2; any strict move improves
                    improved_level = True
            if not moved:
                break

        if not improved_level:
            break

        # aggregate: communities become supernodes
        remap: dict[int, int] = {}
        for i in range(size):
            c = community[i]
            if c not in remap:
                remap[c] = len(remap)
        new_size = len(remap)
        new_adj: list[dict[int, float]] = [dict() for _ in range(new_size)]
        for i in range(size):
            ci = remap[community[i]]
            for j, w in adj[i]:
                if j == i:
                    new_adj[ci][ci] = new_adj[ci].get(ci, 0.0) + w
                else:
                    cj = remap[community[j]]
                    if cj == ci:
                        new_adj[ci][ci] = new_adj[ci].get(ci, 0.0) + w
                    else:
                        new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
        adj = [sorted(d.items()) for d in new_adj]
        adj = [[(j, w) for j, w in row] for row in adj]
        leaf_community = [remap[community[leaf_community[k]]] for k in range(n)]

        if new_size == size:
            break

    # dense renumbering by first appearance in node order
    renumber: dict[int, int] = {}
    assignment: dict[str, int] = {}
    for k, node in enumerate(network.nodes):
        c = leaf_community[k]
        if c not in renumber:
            renumber[c] = len(renumber)
        assignment[node] = renumber[c]
    return Partition(assignment, modularity(network.nodes, network.edges,
                                            assignment, resolution))


# ----------------------------------------------------------------------
# Cluster labels
# ----------------------------------------------------------------------

def _llr(k11: float, k12: float, n1: float, n2: float) -> float:
    """Dunning log-likelihood ratio of a token's counts in two corpora."""
    k21, k22 = n1 - k11, n2 - k12
    total = n1 + n2
    if total == 0:
        return 0.0
    score = 0.0
    col1 = k11 + k12
    col2 = k21 + k22
    for k, row, col in ((k11, n1, col1), (k12, n2, col1), (k21, n1, col2), (k22, n2, col2)):
        expected = row * col / total
        if k > 0 and expected > 0:
            score += k * math.log(k / expected)
    return 2.0 * score


def label_clusters(partition: dict[str, int], node_tokens: dict[str, list[str]],
                   background_tokens: list[str] | None = None,
                   top_k: int = 5) -> dict[int, list[str]]:
    """Per community, the top_k tokens most overrepresented versus the rest
    of the network (or the supplied background when there is no rest),
    ranked by Dunning log-likelihood ratio, ties by token."""
    communities: dict[int, Counter] = {}
    for node, c in partition.items():
        communities.setdefault(c, Counter()).update(node_tokens.get(node, ()))
    all_counts: Counter = Counter()
    for counts in communities.values():
        all_counts.update(counts)

    labels: dict[int, list[str]] = {}
    for c, counts in sorted(communities.items()):
        rest = all_counts - counts
        if sum(rest.values()) == 0 and background_tokens is not None:
            rest = Counter(background_tokens) - counts
            rest = Counter({t: v for t, v in rest.items() if v > 0})
        n1 = float(sum(counts.values()))
        n2 = float(sum(rest.values()))
        if n1 == 0:
            labels[c] = []
            continue
        scored = []
        for token, k11 in counts.items():
            k12 = rest.get(token, 0)
            if n2 > 0 and k12 / n2 >= k11 / n1:
                continue  # not overrepresented here
            scored.append((-_llr(k11, k12, n1, n2), token))
        scored.sort()
        labels[c] = [t for _, t in scored[:top_k]]
    return labels


def doc_token_map(engine: Engine, doc_ids) -> dict[str, list[str]]:
    """Title plus abstract tokens per doc, for paper-network labeling."""
    out = {}
    for d in doc_ids:
        toks = engine.index.doc_tokens[engine.index.id_to_idx[d]]
        out[d] = list(toks["title"]) + list(toks["abstract"])
    return out


def cluster_network(engine: Engine, network: Network, seed: int = 0,
                    resolution: float = 1.0, author_mode: bool = False) -> Network:
    """Attach a Louvain partition and per-community labels to the graph."""
    if network.nodes:
        part = louvain(network, seed, resolution)
        network.partition = part.assignment
        if author_mode:
            author_docs = getattr(network, "author_docs", {})
            node_tokens = {}
            for author in network.nodes:
                toks: list[str] = []
                for d in author_docs.get(author, ()):
                    idx = engine.index.id_to_idx[d]
                    toks.extend(engine.index.doc_tokens[idx]["title"])
                    toks.extend(engine.index.doc_tokens[idx]["abstract"])
                node_tokens[author] = toks
        else:
            node_tokens = doc_token_map(engine, network.nodes)
        background = []
        if len(set(network.partition.values())) <= 1:
            background = [t for toks in doc_token_map(engine, engine.store.docs).values()
                          for t in toks]
        network.labels = label_clusters(network.partition, node_tokens,
                                        background_tokens=background or None)
    return network


# ----------------------------------------------------------------------
# Export
# ----------------------------------------------------------------------

def export_graph(network: Network, fmt: str) -> bytes:
    if fmt == "json":
        return _export_json(network)
    if fmt == "dot":
        return _export_dot(network)
    if fmt == "graphml":
        return _export_graphml(network)
    raise InvalidArgumentError(f"unknown graph format: {fmt}")


def _num(w: float):
    return int(w) if float(w).is_integer() else w


def _export_json(network: Network) -> bytes:
    payload = {
        "nodes": [
            {"id": n, "community": network.partition.get(n, 0),
             "label": network.node_labels.get(n, n)}
            for n in network.nodes
        ],
        "edges": [{"a": a, "b": b, "w": _num(w)} for a, b, w in network.edges],
        "communities": {str(c) : words for c, words in sorted(network.labels.items())},
    }
    return (json.dumps(payload, indent=2, sort_keys=False) + "\n").encode("utf-8")


def load_json_graph(data: bytes | str) -> Network:
    """Inverse of the JSON export, for round-trip checks and the explorer."""
    payload = json.loads(data)
    nodes = [n["id"] for n in payload["nodes"]]
    edges = [(e["a"], e["b"], float(e["w"])) for e in payload["edges"]]
    net = Network(nodes, edges)
    net.partition = {n["id"]: int(n["community"]) for n in payload["nodes"]}
    net.node_labels = {n["id"]: n["label"] for n in payload["nodes"]}
    net.labels = {int(c): words for c, words in payload.get("communities", {}).items()}
    return net


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _export_dot(network: Network) -> bytes:
    lines = ["graph coupling {"]
    for n in network.nodes:
        attrs = f"community={network.partition.get(n, 0)} label={_dot_quote(network.node_labels.get(n, n))}"
        lines.append(f"  {_dot_quote(n)} [{attrs}];")
    for a, b, w in network.edges:
        lines.append(f"  {_dot_quote(a)} -- {_dot_quote(b)} [weight={_num(w)}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _export_graphml(network: Network) -> bytes:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="community" for="node" attr.name="community" attr.type="int"/>',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>',
        '  <graph edgedefault="undirected">',
    ]
    for n in network.nodes:
        lines.append(f"    <node id={quoteattr(n)}>")
        lines.append(f"      <data key=\"community\">{network.partition.get(n, 0)}</data>")
        lines.append(f"      <data key=\"label\">{escape(network.node_labels.get(n, n))}</data>")
        lines.append("    </node>")
    for a, b, w in network.edges:
        lines.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>")
        lines.append(f"      <data key=\"weight\">{_num(w)}</data>")
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return ("\n".join(lines) + "\n").encode("utf-8")
