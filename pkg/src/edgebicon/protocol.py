"""Five-phase distributed edge-biconnectivity protocol.

Phases, each started by the root only after the previous one has finished:

1. BFS tree from the leader; completion detected by a ``SubtreeDone``
   convergecast.
2. ``ComputeDesc`` downcast, ``DescValue`` convergecast of subtree sizes.
3. ``SetPreLabel`` downcast assigning preorder labels ``1..n``.
4. Cycle-edge marking: ``CrossEdgeFrom`` over every non-tree edge and a
   convergecast of ``MarkUpTo(u_min, v_max)`` / ``Null`` reports merged with
   the forwarding rule.
5. ``ComponentIs`` downcast of component labels over the tree minus bridges.

Every message carries at most two labels in ``1..n``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exceptions import NotTerminatedError, ProtocolError
from .graph import Edge, Graph, edge
from .oracles import EdgeClassification
from .sim import Inbox, Kind, Message, Metrics, Outbox, SimConfig, Simulation, build, run_to_quiescence


class Phase(enum.Enum):
    IDLE = "Idle"
    BFS = "BFS"
    COUNT_DESC = "CountDesc"
    PRE_LABEL_WAIT = "PreLabelWait"
    MARKING = "Marking"
    LABELING = "Labeling"
    DONE = "Done"


PARENT, CHILD, CROSS = "parent", "child", "cross"


# --- pure helpers -------------------------------------------------------------------

def desc_total(child_counts: Sequence[int]) -> int:
    """Subtree size from the children's subtree sizes."""
    return 1 + sum(child_counts)


def prelabel_children(label: int, ordered_child_descs: Sequence[int]) -> list[int]:
    """Preorder labels for children taken in order: the first gets ``label + 1``,
    each later one skips the previous sibling's whole subtree."""
    out = []
    nxt = label + 1
    for nd in ordered_child_descs:
        out.append(nxt)
        nxt += nd
    return out


def in_descendant_interval(x: int, k: int, nd: int) -> bool:
    """Whether preorder label ``x`` lies in the subtree of the node labelled ``k``
    with ``nd`` descendants."""
    return k <= x < k + nd


def merge_mark(u_min: int, v_max: int, msg: Message) -> tuple[int, int]:
    if msg.kind is Kind.MARK_UP_TO:
        return min(u_min, msg.a), max(v_max, msg.b)
    if msg.kind is Kind.CROSS_EDGE_FROM:
        return min(u_min, msg.a), max(v_max, msg.a)
    if msg.kind is Kind.NULL:
        return u_min, v_max
    raise ProtocolError(f"cannot merge a {msg.kind.value} message into a marking report")


def decide_bridge(k: int, nd: int, u_min: int, v_max: int) -> tuple[bool, Message]:
    """Forwarding-rule decision once every non-parent neighbor has reported.

    If the whole merged range stays inside this node's subtree, no cycle
    leaves the subtree through the parent edge: it is a bridge.
    """
    if in_descendant_interval(u_min, k, nd) and in_descendant_interval(v_max, k, nd):
        return True, Message(Kind.NULL)
    return False, Message(Kind.MARK_UP_TO, u_min, v_max)


# --- node state machine -------------------------------------------------------------

@dataclass
class BiconNode:
    id: int
    neighbors: tuple[int, ...]
    n: int
    is_root: bool
    skip_cross_edges: bool = False

    phase: Phase = Phase.IDLE
    depth: Optional[int] = None
    parent: Optional[int] = None
    join_round: Optional[int] = None
    explored: set = field(default_factory=set)
    classes: dict = field(default_factory=dict)
    done_children: set = field(default_factory=set)
    children: tuple[int, ...] = ()
    cross_neighbors: tuple[int, ...] = ()

    child_descs: dict = field(default_factory=dict)
    num_desc: Optional[int] = None
    pre_label: Optional[int] = None
    label_round: Optional[int] = None

    u_min: Optional[int] = None
    v_max: Optional[int] = None
    pending_replies: Optional[int] = None
    early_marks: list = field(default_factory=list)
    under_bridge: Optional[bool] = None
    marked_to_parent: Optional[bool] = None
    decided_round: Optional[int] = None

    component: Optional[int] = None
    announced: bool = False
    heard_parent: bool = False
    neighbor_components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n == 1:
            self.phase = Phase.DONE
            self.depth = 0
            self.num_desc = self.pre_label = self.component = 1
            self.under_bridge = True
            self.announced = self.heard_parent = True
        elif self.is_root:
            self.phase = Phase.BFS
            self.depth = 0
            self.join_round = 0

    @property
    def terminal(self) -> bool:
        return self.phase is Phase.DONE

    @property
    def classified(self) -> bool:
        return len(self.classes) == len(self.neighbors)

    def step(self, inbox: Inbox, round: int) -> Outbox:
        if self.phase is Phase.DONE:
            for s, msg in inbox:
                if msg.kind is Kind.COMPONENT_IS:
                    self.neighbor_components[s] = msg.a
            return []
        if self.phase is Phase.IDLE:
            if not inbox:
                return []
            return self._join(inbox, round)

        out: Outbox = []
        if self.is_root and round == 0:
            out.extend((w, Message(Kind.EXPLORE)) for w in self.neighbors)
            self.explored = set(self.neighbors)

        for s, msg in inbox:
            self._receive(s, msg, round, out)

        if self.phase is Phase.BFS:
            self._bfs_progress(round, out)
        if self.phase is Phase.MARKING or (
                self.phase is Phase.PRE_LABEL_WAIT and self.label_round is not None
                and round > self.label_round):
            self._marking_progress(round, out)
        if self.phase is Phase.LABELING:
            self._labeling_progress(round, out)
        return out

    # phase 1 -------------------------------------------------------------------
    def _join(self, inbox: Inbox, round: int) -> Outbox:
        senders = sorted({s for s, msg in inbox if msg.kind is Kind.EXPLORE})
        if len(senders) != len(inbox):
            raise ProtocolError(f"node {self.id}: first contact must be Explore, got {inbox}")
        self.phase = Phase.BFS
        self.depth = round
        self.join_round = round
        self.parent = senders[0]
        self.classes[self.parent] = PARENT
        out: Outbox = []
        for s in senders[1:]:
            self.classes[s] = CROSS
            out.append((s, Message(Kind.NON_CHILD)))
        for w in self.neighbors:
            if w not in self.classes:
                self.explored.add(w)
                out.append((w, Message(Kind.EXPLORE)))
        self._bfs_progress(round, out)
        return out

    def _classify(self, w: int, cls: str) -> None:
        old = self.classes.get(w)
        if old is not None and old != cls:
            raise ProtocolError(f"node {self.id}: neighbor {w} is both {old} and {cls}")
        self.classes[w] = cls

    def _bfs_progress(self, round: int, out: Outbox) -> None:
        if not self.classified and round >= self.join_round + 2:
            # silence from an explored neighbor by now means it adopted us as parent
            for w in self.explored:
                self.classes.setdefault(w, CHILD)
        if not self.classified:
            return
        if not self.children and not self.cross_neighbors:
            self.children = tuple(w for w in self.neighbors if self.classes[w] == CHILD)
            self.cross_neighbors = tuple(w for w in self.neighbors if self.classes[w] == CROSS)
        if not self.done_children.issuperset(self.children):
            return
        if self.is_root:
            self.phase = Phase.COUNT_DESC
            self._start_count(out, round)
        else:
            self.phase = Phase.COUNT_DESC
            out.append((self.parent, Message(Kind.SUBTREE_DONE)))

    # phase 2 ---------------------------------------------------------------------
    def _start_count(self, out: Outbox, round: int) -> None:
        if not self.children:
            self.num_desc = 1
            self._after_count(out, round)
            return
        out.extend((c, Message(Kind.COMPUTE_DESC)) for c in self.children)

    def _after_count(self, out: Outbox, round: int) -> None:
        if self.is_root:
            if self.num_desc != self.n:
                raise ProtocolError(f"root counted {self.num_desc} nodes, expected {self.n}")
            self._set_label(1, out, round)
        else:
            self.phase = Phase.PRE_LABEL_WAIT
            out.append((self.parent, Message(Kind.DESC_VALUE, self.num_desc)))

    # phase 3 ---------------------------------------------------------------------
    def _set_label(self, label: int, out: Outbox, round: int) -> None:
        self.pre_label = label
        self.label_round = round
        self.phase = Phase.PRE_LABEL_WAIT
        labels = prelabel_children(label, [self.child_descs[c] for c in self.children])
        out.extend((c, Message(Kind.SET_PRE_LABEL, lab)) for c, lab in zip(self.children, labels))

    # phase 4 ---------------------------------------------------------------------
    def _start_marking(self, out: Outbox) -> None:
        k, nd = self.pre_label, self.num_desc
        self.phase = Phase.MARKING
        self.u_min, self.v_max = k, k + nd - 1
        crosses = () if self.skip_cross_edges else self.cross_neighbors
        self.pending_replies = len(self.children) + len(crosses)
        out.extend((w, Message(Kind.CROSS_EDGE_FROM, k)) for w in crosses)
        for msg in self.early_marks:
            self._merge(msg)
        self.early_marks = []

    def _merge(self, msg: Message) -> None:
        self.u_min, self.v_max = merge_mark(self.u_min, self.v_max, msg)
        self.pending_replies -= 1
        if self.pending_replies < 0:
            raise ProtocolError(f"node {self.id}: more marking reports than expected")

    def _marking_progress(self, round: int, out: Outbox) -> None:
        if self.phase is Phase.PRE_LABEL_WAIT:
            self._start_marking(out)
        if self.pending_replies:
            return
        self.decided_round = round
        self.phase = Phase.LABELING
        if self.is_root:
            self.under_bridge = True
            self.marked_to_parent = False
            return
        self.under_bridge, report = decide_bridge(self.pre_label, self.num_desc, self.u_min, self.v_max)
        self.marked_to_parent = not self.under_bridge
        out.append((self.parent, report))

    # phase 5 ---------------------------------------------------------------------
    def _labeling_progress(self, round: int, out: Outbox) -> None:
        if self.under_bridge and not self.announced and round > self.decided_round:
            self.component = self.pre_label
            self._announce(out)
        if self.announced and (self.is_root or self.heard_parent):
            self.phase = Phase.DONE

    def _announce(self, out: Outbox) -> None:
        self.announced = True
        out.extend((w, Message(Kind.COMPONENT_IS, self.component)) for w in self.neighbors)

    # dispatch ----------------------------------------------------------------------
    def _receive(self, s: int, msg: Message, round: int, out: Outbox) -> None:
        kind = msg.kind
        if kind is Kind.EXPLORE:
            if s not in self.explored:
                raise ProtocolError(f"node {self.id}: unexpected Explore from {s}")
            self._classify(s, CROSS)
        elif kind is Kind.NON_CHILD:
            self._classify(s, CROSS)
        elif kind is Kind.SUBTREE_DONE:
            self._classify(s, CHILD)
            self.done_children.add(s)
        elif kind is Kind.COMPUTE_DESC:
            self._expect_parent(s, kind)
            self._start_count(out, round)
        elif kind is Kind.DESC_VALUE:
            self.child_descs[s] = msg.a
            if len(self.child_descs) == len(self.children):
                self.num_desc = desc_total([self.child_descs[c] for c in self.children])
                self._after_count(out, round)
        elif kind is Kind.SET_PRE_LABEL:
            self._expect_parent(s, kind)
            self._set_label(msg.a, out, round)
        elif kind in (Kind.CROSS_EDGE_FROM, Kind.MARK_UP_TO, Kind.NULL):
            if self.phase is Phase.MARKING:
                self._merge(msg)
            else:
                self.early_marks.append(msg)
        elif kind is Kind.COMPONENT_IS:
            self.neighbor_components[s] = msg.a
            if s == self.parent:
                if self.under_bridge is None:
                    raise ProtocolError(f"node {self.id}: component label before marking finished")
                self.heard_parent = True
                if not self.under_bridge:
                    self.component = msg.a
                    self._announce(out)
        else:
            raise ProtocolError(f"node {self.id}: unexpected {kind.value} from {s}")

    def _expect_parent(self, s: int, kind: Kind) -> None:
        if s != self.parent:
            raise ProtocolError(f"node {self.id}: {kind.value} from non-parent {s}")


def bicon_factory(skip_cross_edges: bool = False):
    """Node factory for :func:`edgebicon.sim.build`.

    ``skip_cross_edges`` is a fault hook for negative controls: nodes neither
    send nor wait for ``CrossEdgeFrom`` messages, so cycles go unmarked.
    """
    def factory(v, neighbors, is_initiator, n):
        return BiconNode(v, tuple(neighbors), n, is_initiator, skip_cross_edges)
    return factory


# --- running and extracting ---------------------------------------------------------

@dataclass(frozen=True)
class BiconResult:
    """Everything a finished run leaves at the nodes, gathered for checking."""

    classification: EdgeClassification
    parent: tuple[Optional[int], ...]
    depth: tuple[int, ...]
    pre_label: tuple[int, ...]
    num_desc: tuple[int, ...]
    marked_to_parent: tuple[Optional[bool], ...]
    under_bridge: tuple[Optional[bool], ...]
    cross_edges: frozenset[Edge]
    metrics: Metrics

    @property
    def tree_edges(self) -> frozenset[Edge]:
        return frozenset(edge(v, p) for v, p in enumerate(self.parent) if p is not None)

    @property
    def marked_edges(self) -> frozenset[Edge]:
        """Tree edges flagged as lying on a cycle."""
        return frozenset(edge(v, p) for v, p in enumerate(self.parent)
                         if p is not None and self.marked_to_parent[v])

    @property
    def height(self) -> int:
        return max(self.depth)

    def to_json(self) -> dict:
        out = self.classification.to_json()
        out["tree"] = {"parent": list(self.parent), "pre_label": list(self.pre_label)}
        out["metrics"] = self.metrics.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def extract_result(sim: Simulation) -> BiconResult:
    """Read the labels left at the nodes; an edge is a bridge iff its endpoints disagree."""
    nodes = sim.nodes
    if not all(node.terminal for node in nodes):
        raise NotTerminatedError("run has not terminated at every node")
    g = sim.graph
    comp = tuple(node.component for node in nodes)
    bridges = frozenset(e for e in g.edges if comp[e[0]] != comp[e[1]])
    cls = EdgeClassification(bridges, g.edges - bridges, comp)
    return BiconResult(
        classification=cls,
        parent=tuple(node.parent for node in nodes),
        depth=tuple(node.depth for node in nodes),
        pre_label=tuple(node.pre_label for node in nodes),
        num_desc=tuple(node.num_desc for node in nodes),
        marked_to_parent=tuple(node.marked_to_parent for node in nodes),
        under_bridge=tuple(node.under_bridge for node in nodes),
        cross_edges=frozenset(edge(node.id, w) for node in nodes for w in node.cross_neighbors),
        metrics=sim.metrics,
    )


def run_biconnectivity(g: Graph, initiator: int = 0, *, max_rounds: int = 10_000,
                       trace: bool = False, reverse_order: bool = False,
                       skip_cross_edges: bool = False) -> tuple[BiconResult, Simulation]:
    config = SimConfig(initiator=initiator, max_rounds=max_rounds, congest=True,
                       trace=trace, reverse_order=reverse_order)
    sim = build(g, bicon_factory(skip_cross_edges), config)
    run_to_quiescence(sim)
    return extract_result(sim), sim
