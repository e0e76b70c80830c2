"""Cross-checking protocol runs against the sequential oracles."""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable

from .graph import Graph, diameter, format_edge_list, gadget_edges, attach_gadget
from .oracles import bridges_bruteforce, bridges_lowlink, components_oracle
from .protocol import BiconResult, run_biconnectivity
from .sim import congest_bound

ROUND_FACTOR = 12
MESSAGE_FACTOR = 8


# --- tree properties of a finished run ------------------------------------------------

def _ancestors(parent: tuple, v: int) -> list[int]:
    chain = [v]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    return chain


def preorder_violations(res: BiconResult) -> list[str]:
    """Labels must be a preorder of the tree: a bijection onto 1..n, parents before
    children, and each subtree exactly the interval ``[k, k + #desc)``."""
    n = len(res.parent)
    out = []
    if sorted(res.pre_label) != list(range(1, n + 1)):
        out.append("pre-labels are not a bijection onto 1..n")
        return out
    roots = [v for v in range(n) if res.parent[v] is None]
    if len(roots) != 1 or res.pre_label[roots[0]] != 1:
        out.append("root must be unique and labelled 1")
    subtree: dict[int, set[int]] = {v: set() for v in range(n)}
    for v in range(n):
        for a in _ancestors(res.parent, v):
            subtree[a].add(res.pre_label[v])
    for v in range(n):
        k, nd = res.pre_label[v], res.num_desc[v]
        if nd != len(subtree[v]):
            out.append(f"node {v}: #desc {nd} but subtree has {len(subtree[v])} nodes")
        if subtree[v] != set(range(k, k + nd)):
            out.append(f"node {v}: descendants are not the interval [{k}, {k + nd})")
        p = res.parent[v]
        if p is not None and res.pre_label[p] >= k:
            out.append(f"node {v}: label not above its parent's")
    return out


def lca_violations(res: BiconResult, max_exhaustive: int = 20, samples: int = 10_000,
                   seed: int = 0) -> int:
    """Count label triples ``a <= b <= c`` where the tree LCA of ``a`` and ``c`` is not
    an ancestor of ``b``.  Exhaustive up to ``max_exhaustive`` nodes, sampled above."""
    n = len(res.parent)
    node_of = {lab: v for v, lab in enumerate(res.pre_label)}
    anc = [set(_ancestors(res.parent, v)) for v in range(n)]
    chains = [_ancestors(res.parent, v) for v in range(n)]

    def lca(x: int, y: int) -> int:
        for a in chains[x]:
            if a in anc[y]:
                return a
        raise AssertionError("tree is not connected")

    if n <= max_exhaustive:
        triples: Iterable = combinations_with_replacement(range(1, n + 1), 3)
    else:
        rng = random.Random(seed)
        triples = (tuple(sorted(rng.randint(1, n) for _ in range(3))) for _ in range(samples))
    bad = 0
    for a, b, c in triples:
        top = lca(node_of[a], node_of[c])
        if top not in anc[node_of[b]]:
            bad += 1
    return bad


# --- one graph ------------------------------------------------------------------------

@dataclass
class GraphCheck:
    index: int
    source: str
    n: int
    m: int
    diam: int
    rounds: int
    messages: int
    max_bits: int
    failures: list[str] = field(default_factory=list)
    edge_list: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {"index": self.index, "source": self.source, "n": self.n, "m": self.m,
               "diam": self.diam, "rounds": self.rounds, "messages": self.messages,
               "max_bits": self.max_bits, "failures": self.failures}
        if self.failures:
            out["edge_list"] = self.edge_list
        return out


def check_graph(g: Graph, index: int = 0, source: str = "", initiator: int = 0,
                skip_cross_edges: bool = False, lca: bool = True,
                round_factor: int = ROUND_FACTOR, message_factor: int = MESSAGE_FACTOR) -> GraphCheck:
    """Run the protocol on ``g`` and compare every checkable property with the oracles."""
    res, _ = run_biconnectivity(g, initiator, skip_cross_edges=skip_cross_edges)
    met = res.metrics
    d = diameter(g)
    rep = GraphCheck(index, source, g.n, g.m, d, met.rounds, met.total_messages, met.max_message_bits)
    fail = rep.failures

    brute = bridges_bruteforce(g)
    if bridges_lowlink(g) != brute:
        fail.append("low-link and deletion bridge oracles disagree")
    cls = res.classification
    if cls.bridges != brute:
        fail.append(f"bridges {sorted(cls.bridges)} != oracle {sorted(brute)}")
    oracle_labels = components_oracle(g, brute)
    if cls.partition() != _partition(oracle_labels):
        fail.append("component partition differs from oracle")
    if res.marked_edges | res.cross_edges != g.edges - brute:
        fail.append("marked tree edges plus cross edges differ from the cycle-edge set")
    for v, p in enumerate(res.parent):
        if p is not None and res.under_bridge[v] != ((min(v, p), max(v, p)) in brute):
            fail.append(f"node {v}: under_bridge flag wrong")
            break
    forest = _partition(_forest_labels(g.n, res.tree_edges - brute))
    if forest != _partition(oracle_labels):
        fail.append("tree minus bridges does not span the components")

    if met.rounds > round_factor * d + round_factor:
        fail.append(f"rounds {met.rounds} > {round_factor}*Diam+{round_factor}")
    if met.total_messages > message_factor * g.m + message_factor:
        fail.append(f"messages {met.total_messages} > {message_factor}*m+{message_factor}")
    if met.max_message_bits > congest_bound(g.n):
        fail.append(f"message of {met.max_message_bits} bits exceeds {congest_bound(g.n)}")
    silent = [e for e, c in met.per_edge_counts.items() if c < 1]
    if silent:
        fail.append(f"silent edges {silent}")

    fail.extend(preorder_violations(res))
    if lca:
        bad = lca_violations(res)
        if bad:
            fail.append(f"{bad} label triples violate the LCA interval property")
    if fail:
        rep.edge_list = format_edge_list(g)
    return rep


def _partition(labels) -> frozenset:
    groups: dict = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(v)
    return frozenset(frozenset(s) for s in groups.values())


def _forest_labels(n: int, edges) -> list[int]:
    label = list(range(n))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for u, v in edges:
        label[find(u)] = find(v)
    return [find(v) for v in range(n)]


def check_gadget(g: Graph, e: tuple[int, int]) -> list[str]:
    """Coverage experiment: no silent edge on ``g``; all ten gadget edges right on G'."""
    fail = []
    res, _ = run_biconnectivity(g)
    silent = [x for x, c in res.metrics.per_edge_counts.items() if c < 1]
    if silent:
        fail.append(f"silent edges on G: {silent}")
    g2 = attach_gadget(g, e)
    res2, _ = run_biconnectivity(g2)
    brute = bridges_bruteforce(g2)
    for x in gadget_edges(g.n, e):
        if (x in res2.classification.bridges) != (x in brute):
            fail.append(f"gadget edge {x} misclassified")
    return fail


# --- corpus report ----------------------------------------------------------------------

def _check_job(args):
    g, i, src, skip, rf, mf = args
    return check_graph(g, i, src, skip_cross_edges=skip, round_factor=rf, message_factor=mf)


def check_corpus(entries: list[tuple[str, Graph]], skip_cross_edges: bool = False,
                 workers: int = 1, round_factor: int = ROUND_FACTOR,
                 message_factor: int = MESSAGE_FACTOR) -> dict:
    """Check every graph; the report is ordered by corpus index and free of timings."""
    jobs = [(g, i, src, skip_cross_edges, round_factor, message_factor)
            for i, (src, g) in enumerate(entries)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_job, jobs, chunksize=16))
    else:
        results = [_check_job(j) for j in jobs]
    mismatches = [r.to_json() for r in results if not r.ok]
    nontrivial = [r for r in results if r.diam > 0]
    return {
        "graphs": len(results),
        "mismatch_count": len(mismatches),
        "mismatches": mismatches,
        "max_rounds_per_diam": max((r.rounds / r.diam for r in nontrivial), default=0.0),
        "max_messages_per_edge": max((r.messages / r.m for r in results if r.m), default=0.0),
        "max_message_bits": max((r.max_bits for r in results), default=0),
        "round_bound": f"{round_factor}*Diam+{round_factor}",
        "message_bound": f"{message_factor}*m+{message_factor}",
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
