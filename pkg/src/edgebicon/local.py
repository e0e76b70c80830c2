"""All-initiated bridge finding with unbounded messages, plus the doubling schedule.

Every node starts at round 0, floods everything it knows about the topology to
its neighbors each round, and marks an edge as a non-bridge as soon as the edge
lies on a cycle of its known subgraph.  After round ``t`` a node knows the
adjacency of every node within distance ``t``.  Marks are sound (only real
cycles are used) and monotone (knowledge only grows).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import BiconError
from .graph import Edge, Graph, edge
from .oracles import bridges_lowlink, bridges_oracle
from .sim import Inbox, Kind, Message, Metrics, Outbox, SimConfig, Simulation, build


class HorizonExhausted(BiconError):
    """Classification never became (permanently) correct within the round horizon."""


@dataclass
class LocalNode:
    id: int
    neighbors: tuple[int, ...]
    n: int
    known_nodes: frozenset = frozenset()
    known_edges: frozenset = frozenset()
    non_bridges: frozenset = frozenset()

    def __post_init__(self):
        self.known_nodes = frozenset([self.id])
        self.known_edges = frozenset(edge(self.id, w) for w in self.neighbors)

    @property
    def terminal(self) -> bool:
        # will-maintaining: never stops on its own, never blocks quiescence either
        return True

    def edge_class(self, e: Edge) -> str:
        return "non-bridge" if e in self.non_bridges else "assumed-bridge"

    def step(self, inbox: Inbox, round: int) -> Outbox:
        nodes, edges = set(self.known_nodes), set(self.known_edges)
        for _, msg in inbox:
            if msg.kind is not Kind.TOPOLOGY:
                continue
            their_nodes, their_edges = msg.payload
            nodes.update(their_nodes)
            edges.update(their_edges)
        if len(edges) != len(self.known_edges) or round == 0:
            self.known_edges = frozenset(edges)
            known = Graph(self.n, self.known_edges)
            self.non_bridges = self.non_bridges | (self.known_edges - bridges_lowlink(known))
        self.known_nodes = frozenset(nodes)
        payload = (tuple(sorted(self.known_nodes)), tuple(sorted(self.known_edges)))
        msg = Message(Kind.TOPOLOGY, payload=payload)
        return [(w, msg) for w in self.neighbors]


def local_factory(v, neighbors, is_initiator, n):
    return LocalNode(v, tuple(neighbors), n)


@dataclass
class LocalRun:
    """Per-round snapshots of one run; ``snapshots[r]`` is taken after round ``r``."""

    graph: Graph
    snapshots: list[tuple[frozenset, ...]] = field(default_factory=list)
    known: list[tuple[frozenset, ...]] = field(default_factory=list)
    metrics: Optional[Metrics] = None

    def final_non_bridges(self) -> tuple[frozenset, ...]:
        return self.snapshots[-1]

    def endpoint_bridges(self, r: int = -1) -> frozenset[Edge]:
        """Edges that at least one endpoint still assumes to be bridges after round ``r``."""
        snap = self.snapshots[r]
        return frozenset(e for e in self.graph.edges if e not in snap[e[0]] or e not in snap[e[1]])

    def to_json(self) -> dict:
        """Per-round endpoint classification, for plotting stabilization curves."""
        rounds = []
        for r, snap in enumerate(self.snapshots):
            rounds.append({
                "round": r,
                "non_bridge_at_both_endpoints": [list(e) for e in sorted(self.graph.edges)
                                                 if e in snap[e[0]] and e in snap[e[1]]],
                "marked_anywhere": len(frozenset().union(*snap)),
            })
        return {"rounds": rounds, "metrics": self.metrics.to_json() if self.metrics else None}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def run_local(g: Graph, rounds: int, *, congest: bool = False, trace: bool = False) -> tuple[LocalRun, Simulation]:
    """Run the flooding algorithm for ``rounds`` rounds, snapshotting after each."""
    if congest:
        raise ValueError("the local algorithm needs unbounded-message mode (congest=False)")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    sim = build(g, local_factory, SimConfig(initiator="all", congest=False, trace=trace))
    run = LocalRun(g)
    for _ in range(rounds):
        sim.step()
        run.snapshots.append(tuple(node.non_bridges for node in sim.nodes))
        run.known.append(tuple(node.known_nodes for node in sim.nodes))
    run.metrics = sim.metrics
    return run, sim


def classification_correct_round(run: LocalRun, bridges: Optional[frozenset] = None) -> int:
    """First round from which both endpoints of every edge classify it correctly for good."""
    g = run.graph
    if bridges is None:
        bridges = bridges_oracle(g)
    correct = [run.endpoint_bridges(r) == bridges for r in range(len(run.snapshots))]
    if not correct or not correct[-1]:
        raise HorizonExhausted(f"not correct within {len(run.snapshots)} rounds")
    first = len(correct) - 1
    while first > 0 and correct[first - 1]:
        first -= 1
    return first


@dataclass(frozen=True)
class DoublingPhase:
    guess: int
    rounds: int
    rounds_total: int
    correct: bool
    messages: int


@dataclass(frozen=True)
class DoublingReport:
    """Outcome of guessing the witness radius as 1, 2, 4, ...

    A guess ``g`` runs a fresh flooding phase of ``2 * g`` rounds: ``g`` to
    reach a witness cycle and ``g`` more to carry it to the edge's endpoints.
    The output between phases is the classification of the last finished phase.
    """

    phases: tuple[DoublingPhase, ...]
    first_correct_phase: int
    rounds_to_correct: int
    stable: bool

    def to_json(self) -> dict:
        return {
            "phases": [vars(p) for p in self.phases],
            "first_correct_phase": self.first_correct_phase,
            "rounds_to_correct": self.rounds_to_correct,
            "stable": self.stable,
        }


def doubling_run(g: Graph, horizon: int, bridges: Optional[frozenset] = None) -> DoublingReport:
    """Run doubling phases while the cumulative round count stays within ``horizon``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if bridges is None:
        bridges = bridges_oracle(g)
    phases = []
    total = 0
    guess = 1
    while total + 2 * guess <= horizon:
        run, sim = run_local(g, 2 * guess)
        total += 2 * guess
        ok = run.endpoint_bridges() == bridges
        phases.append(DoublingPhase(guess, 2 * guess, total, ok, sim.metrics.total_messages))
        guess *= 2
    first = next((i for i, p in enumerate(phases) if p.correct), None)
    if first is None:
        raise HorizonExhausted(f"no doubling phase was correct within {horizon} rounds")
    stable = all(p.correct for p in phases[first:])
    return DoublingReport(tuple(phases), first, phases[first].rounds_total, stable)
