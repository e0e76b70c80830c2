"""Deterministic synchronous message-passing engine.

Round ``r`` delivers exactly the messages sent in round ``r - 1``.  Each node
is stepped once per round in ascending id order (or descending, to check
order independence) with its inbox sorted by sender id.  In CONGEST mode the
engine rejects a second message on one directed edge in a round and any
message wider than ``4 + 2 * ceil(log2(n + 1))`` bits.
"""

from __future__ import annotations

import copy
import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Union

from .exceptions import CongestViolation, GraphError, NonTerminationError, ProtocolError
from .graph import Edge, Graph, edge, require_connected

KIND_BITS = 4


class Kind(enum.Enum):
    EXPLORE = "Explore"
    CHILD = "Child"
    NON_CHILD = "NonChild"
    SUBTREE_DONE = "SubtreeDone"
    COMPUTE_DESC = "ComputeDesc"
    DESC_VALUE = "DescValue"
    SET_PRE_LABEL = "SetPreLabel"
    CROSS_EDGE_FROM = "CrossEdgeFrom"
    MARK_UP_TO = "MarkUpTo"
    NULL = "Null"
    COMPONENT_IS = "ComponentIs"
    # unbounded-message mode only
    TOPOLOGY = "Topology"


_ONE_LABEL = {Kind.DESC_VALUE, Kind.SET_PRE_LABEL, Kind.CROSS_EDGE_FROM, Kind.COMPONENT_IS}


@dataclass(frozen=True)
class Message:
    """A tagged message carrying at most two node labels.

    ``payload`` is only used by :attr:`Kind.TOPOLOGY` messages, which carry a
    serialized neighborhood and are legal only with CONGEST checks disabled.
    """

    kind: Kind
    a: Optional[int] = None
    b: Optional[int] = None
    payload: Optional[tuple] = None

    def __post_init__(self):
        k = self.kind
        if k is Kind.MARK_UP_TO:
            if self.a is None or self.b is None:
                raise ValueError("MarkUpTo carries two labels")
            if self.a > self.b:
                raise ValueError(f"MarkUpTo needs a <= b, got ({self.a}, {self.b})")
        elif k in _ONE_LABEL:
            if self.a is None or self.b is not None:
                raise ValueError(f"{k.value} carries exactly one label")
        elif self.a is not None or self.b is not None:
            raise ValueError(f"{k.value} carries no labels")
        if (self.payload is not None) != (k is Kind.TOPOLOGY):
            raise ValueError("only Topology messages carry a payload")

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(x for x in (self.a, self.b) if x is not None)

    def __repr__(self) -> str:
        args = ", ".join(str(x) for x in self.labels)
        return f"{self.kind.value}({args})"


def label_bits(n: int) -> int:
    """Width of one node label: ``ceil(log2(n + 1))``."""
    return max(int(n), 0).bit_length()


def congest_bound(n: int) -> int:
    return KIND_BITS + 2 * label_bits(n)


def message_bit_size(msg: Message, n: int) -> int:
    """Encoded size in bits: a 4-bit kind tag plus one label width per label.

    A topology payload (``(nodes, edges)``) is charged one label per node and
    two per edge.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    w = label_bits(n)
    size = KIND_BITS + len(msg.labels) * w
    if msg.payload is not None:
        nodes, edges = msg.payload
        size += w * (len(nodes) + 2 * len(edges))
    return size


Outbox = list[tuple[int, Message]]
Inbox = list[tuple[int, Message]]


class Node(Protocol):
    """What the engine needs from a node; protocols supply concrete classes."""

    id: int

    def step(self, inbox: Inbox, round: int) -> Outbox: ...

    @property
    def terminal(self) -> bool: ...


NodeFactory = Callable[[int, tuple, bool, int], Node]


@dataclass(frozen=True)
class SimConfig:
    """``initiator`` is a node id or ``"all"``; ``None`` is allowed only for unit tests."""

    initiator: Union[int, str, None] = 0
    max_rounds: int = 10_000
    congest: bool = True
    seed: int = 0
    reverse_order: bool = False
    trace: bool = False


@dataclass
class Metrics:
    rounds: int = 0
    total_messages: int = 0
    max_message_bits: int = 0
    per_edge_counts: dict[Edge, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "total_messages": self.total_messages,
            "max_message_bits": self.max_message_bits,
            "per_edge_counts": [[u, v, c] for (u, v), c in sorted(self.per_edge_counts.items())],
        }


@dataclass(frozen=True)
class RoundReport:
    round: int
    delivered: int
    sent: int
    acted: tuple[int, ...]
    quiescent: bool


@dataclass(frozen=True)
class TraceRecord:
    round: int
    sender: int
    receiver: int
    msg: Message
    bits: int

    def to_json(self) -> dict:
        return {"round": self.round, "from": self.sender, "to": self.receiver,
                "kind": self.msg.kind.value, "a": self.msg.a, "b": self.msg.b, "bits": self.bits}


class Simulation:
    """Round engine: node objects, in-flight messages, round counter, metrics."""

    def __init__(self, graph: Graph, nodes: list, config: SimConfig, initiators: frozenset[int]):
        self.graph = graph
        self.nodes = nodes
        self.config = config
        self.initiators = initiators
        self.round = 0
        self.metrics = Metrics(per_edge_counts={e: 0 for e in graph.sorted_edges()})
        self.trace: list[TraceRecord] = []
        self.first_message_round: dict[int, int] = {}
        self.first_action_round: dict[int, int] = {}
        self._inflight: list[tuple[int, int, Message]] = []
        self._awake = set(initiators)
        self._bound = congest_bound(graph.n)
        self._neighbor_sets = [frozenset(graph.neighbors(v)) for v in graph.nodes()]

    @property
    def inflight(self) -> list[tuple[int, int, Message]]:
        return list(self._inflight)

    def is_quiescent(self) -> bool:
        """No messages in flight and every woken node reports terminal.

        Nodes that were never woken cannot act again, so they do not block.
        """
        if self._inflight:
            return False
        return all(self.nodes[v].terminal for v in self._awake)

    def step(self) -> RoundReport:
        r = self.round
        inboxes: dict[int, Inbox] = {}
        for sender, receiver, msg in self._inflight:
            inboxes.setdefault(receiver, []).append((sender, msg))
        delivered = len(self._inflight)
        for receiver, box in inboxes.items():
            box.sort(key=lambda item: item[0])
            if receiver not in self._awake:
                self._awake.add(receiver)

        order = range(self.graph.n - 1, -1, -1) if self.config.reverse_order else range(self.graph.n)
        outgoing: list[tuple[int, int, Message]] = []
        acted = []
        for v in order:
            inbox = inboxes.get(v, [])
            node = self.nodes[v]
            dormant = v not in self._awake
            before = copy.deepcopy(node) if dormant else None
            out = node.step(inbox, r)
            if dormant:
                if out or node != before:
                    raise ProtocolError(
                        f"node {v} in round {r}: acted before receiving any message")
                continue
            if out or inbox:
                acted.append(v)
            if out and v not in self.first_action_round:
                self.first_action_round[v] = r
            used = set()
            for to, msg in out:
                if to not in self._neighbor_sets[v]:
                    raise CongestViolation(v, r, f"send to non-neighbor {to}")
                if self.config.congest:
                    if to in used:
                        raise CongestViolation(v, r, f"second message on edge {v}->{to}")
                    self._check_width(v, r, msg)
                used.add(to)
                outgoing.append((v, to, msg))

        outgoing.sort(key=lambda t: (t[0], t[1]))
        n = self.graph.n
        m = self.metrics
        for sender, receiver, msg in outgoing:
            bits = message_bit_size(msg, n)
            m.total_messages += 1
            m.per_edge_counts[edge(sender, receiver)] += 1
            m.max_message_bits = max(m.max_message_bits, bits)
            self.first_message_round.setdefault(receiver, r)
            if self.config.trace:
                self.trace.append(TraceRecord(r, sender, receiver, msg, bits))
        self._inflight = outgoing
        self.round = r + 1
        m.rounds = self.round
        return RoundReport(r, delivered, len(outgoing), tuple(sorted(acted)),
                           quiescent=delivered == 0 and not outgoing)

    def _check_width(self, v: int, r: int, msg: Message) -> None:
        if msg.payload is not None:
            raise CongestViolation(v, r, "topology payloads need unbounded-message mode")
        n = self.graph.n
        for lab in msg.labels:
            if not 0 <= lab <= n:
                raise CongestViolation(v, r, f"label {lab} does not fit in {label_bits(n)} bits")
        if message_bit_size(msg, n) > self._bound:
            raise CongestViolation(v, r, f"message {msg!r} exceeds {self._bound} bits")

    def run(self, rounds: int) -> Metrics:
        """Step exactly ``rounds`` times regardless of quiescence."""
        for _ in range(rounds):
            self.step()
        return self.metrics

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(t.to_json(), sort_keys=True) + "\n" for t in self.trace)


def build(graph: Graph, factory: NodeFactory, config: SimConfig = SimConfig()) -> Simulation:
    """Instantiate one node per vertex through ``factory(id, neighbors, is_initiator, n)``."""
    require_connected(graph)
    if config.max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    init = config.initiator
    if init == "all":
        initiators = frozenset(graph.nodes())
    elif init is None:
        initiators = frozenset()
    else:
        if isinstance(init, bool) or not isinstance(init, int) or not 0 <= init < graph.n:
            raise GraphError(f"invalid initiator {init!r} for a graph on {graph.n} nodes")
        initiators = frozenset([init])
    nodes = [factory(v, graph.neighbors(v), v in initiators, graph.n) for v in graph.nodes()]
    return Simulation(graph, nodes, config, initiators)


def run_to_quiescence(sim: Simulation, max_rounds: Optional[int] = None) -> Metrics:
    """Step until no message is in flight and every woken node is terminal."""
    limit = sim.config.max_rounds if max_rounds is None else max_rounds
    if limit < 1:
        raise ValueError("max_rounds must be >= 1")
    while not sim.is_quiescent():
        if sim.round >= limit:
            raise NonTerminationError(f"no quiescence within {limit} rounds")
        sim.step()
    return sim.metrics

