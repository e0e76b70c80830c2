"""Sequential ground truth: bridges, components, cycle-witness radius.

Everything here is a plain function over an immutable :class:`Graph`, so the
distributed protocols can be checked against it from any thread.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .exceptions import CycleCapExceeded
from .graph import Edge, Graph, bfs_distances, distance_matrix, edge, is_connected, require_connected

DEFAULT_CYCLE_NODE_CAP = 12
DEFAULT_CYCLE_COUNT_CAP = 10**6


@dataclass(frozen=True)
class EdgeClassification:
    """Bridge / cycle-edge split of a graph plus a per-node component label."""

    bridges: frozenset[Edge]
    cycle_edges: frozenset[Edge]
    component_label: tuple[int, ...]

    def partition(self) -> frozenset[frozenset[int]]:
        """Components as a set of node sets, for label-agnostic comparison."""
        groups: dict[int, set[int]] = {}
        for v, lab in enumerate(self.component_label):
            groups.setdefault(lab, set()).add(v)
        return frozenset(frozenset(s) for s in groups.values())

    def to_json(self) -> dict:
        return {
            "components": list(self.component_label),
            "bridges": [list(e) for e in sorted(self.bridges)],
        }


def bridges_bruteforce(g: Graph) -> frozenset[Edge]:
    """Bridges by definition: edges whose deletion disconnects the graph."""
    require_connected(g)
    return frozenset(e for e in g.edges if not is_connected(g.without_edge(*e)))


def bridges_lowlink(g: Graph) -> frozenset[Edge]:
    """Linear-time bridges via DFS discovery times and low-links (iterative)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    found = set()
    clock = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = clock
        clock += 1
        # frames: (node, parent, neighbor iterator)
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    found.add(edge(parent, u))
    return frozenset(found)


def bridges_oracle(g: Graph) -> frozenset[Edge]:
    """Bridge set of a connected graph; the deletion brute force is the reference."""
    return bridges_bruteforce(g)


def _label_by_min(g: Graph, removed: frozenset[Edge]) -> tuple[int, ...]:
    label = [-1] * g.n
    for s in g.nodes():
        if label[s] >= 0:
            continue
        label[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if label[w] < 0 and edge(u, w) not in removed:
                    label[w] = s
                    stack.append(w)
    return tuple(label)


def components_oracle(g: Graph, bridges: frozenset[Edge] | None = None) -> tuple[int, ...]:
    """Edge-biconnected component label per node (smallest node id in the component)."""
    if bridges is None:
        bridges = bridges_oracle(g)
    else:
        require_connected(g)
    return _label_by_min(g, bridges)


def classify(g: Graph, fast: bool = False) -> EdgeClassification:
    """Oracle :class:`EdgeClassification`; ``fast`` uses low-links instead of deletion."""
    require_connected(g)
    br = bridges_lowlink(g) if fast else bridges_bruteforce(g)
    return EdgeClassification(br, g.edges - br, _label_by_min(g, br))


# --- path/flow witnesses ---------------------------------------------------------

def has_cycle_through(g: Graph, u: int, v: int) -> bool:
    """True iff edge ``(u, v)`` lies on a simple cycle: ``v`` is reachable from ``u`` in ``g - e``."""
    return bfs_distances(g.without_edge(u, v), u)[v] >= 0


def edge_disjoint_paths(g: Graph, s: int, t: int, limit: int = 2) -> int:
    """Number of edge-disjoint ``s``-``t`` paths, counted up to ``limit`` by augmentation."""
    if s == t:
        return limit
    # residual capacity per directed arc; each undirected edge yields two unit arcs
    cap = {}
    for a, b in g.edges:
        cap[(a, b)] = 1
        cap[(b, a)] = 1
    flow = 0
    while flow < limit:
        prev = {s: None}
        queue = deque([s])
        while queue and t not in prev:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in prev and cap[(x, y)] > 0:
                    prev[y] = x
                    queue.append(y)
        if t not in prev:
            break
        y = t
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
    return flow


def equivalent_by_deletion(g: Graph, x: int, y: int) -> bool:
    """``x ~ y``: no single edge deletion separates them."""
    for e in g.edges:
        if bfs_distances(g.without_edge(*e), x)[y] < 0:
            return False
    return True


# --- simple cycles and the cycle-witness radius --------------------------------------

def simple_cycles(g: Graph, max_cycles: int = DEFAULT_CYCLE_COUNT_CAP) -> Iterable[tuple[int, ...]]:
    """Yield every simple cycle (length >= 3) exactly once.

    Each cycle is rooted at its smallest node and oriented so that the second
    node is smaller than the last.
    """
    count = 0
    adj = [g.neighbors(v) for v in g.nodes()]
    for start in g.nodes():
        path = [start]
        on_path = {start}
        iters = [iter(adj[start])]
        while iters:
            advanced = False
            for w in iters[-1]:
                if w == start:
                    if len(path) >= 3 and path[1] < path[-1]:
                        count += 1
                        if count > max_cycles:
                            raise CycleCapExceeded(f"more than {max_cycles} simple cycles")
                        yield tuple(path)
                elif w > start and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    iters.append(iter(adj[w]))
                    advanced = True
                    break
            if not advanced:
                iters.pop()
                on_path.discard(path.pop())


def _cycle_edges(cycle: tuple[int, ...]) -> list[Edge]:
    return [edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def edge_witness_radii(g: Graph, max_nodes: int = DEFAULT_CYCLE_NODE_CAP,
                       max_cycles: int = DEFAULT_CYCLE_COUNT_CAP) -> dict[Edge, int]:
    """Per cycle edge: the smallest witness radius over all simple cycles containing it."""
    require_connected(g)
    if g.n > max_nodes:
        raise CycleCapExceeded(f"n={g.n} exceeds the cycle-enumeration cap of {max_nodes}")
    dist = distance_matrix(g)
    radius_of_set: dict[frozenset[int], int] = {}
    best: dict[Edge, int] = {}
    for cyc in simple_cycles(g, max_cycles):
        key = frozenset(cyc)
        rad = radius_of_set.get(key)
        if rad is None:
            rad = min(max(dist[v][u] for u in cyc) for v in g.nodes())
            radius_of_set[key] = rad
        for e in _cycle_edges(cyc):
            if rad < best.get(e, g.n):
                best[e] = rad
    return best


def cycle_witness_radius(g: Graph, max_nodes: int = DEFAULT_CYCLE_NODE_CAP,
                         max_cycles: int = DEFAULT_CYCLE_COUNT_CAP) -> int:
    """Exact cycle-witness radius by simple-cycle enumeration; 0 when acyclic."""
    return max(edge_witness_radii(g, max_nodes, max_cycles).values(), default=0)


def cycle_witness_radius_balls(g: Graph) -> int:
    """Polynomial route to the same value.

    A cycle has all nodes within distance r of v exactly when it lives in the
    subgraph induced by the radius-r ball around v, so an edge's witness radius
    is the least r for which it is a non-bridge of some such ball.
    """
    require_connected(g)
    dist = distance_matrix(g)
    best: dict[Edge, int] = {}
    for v in g.nodes():
        for r in range(max(dist[v]) + 1):
            ball = {u for u in g.nodes() if dist[v][u] <= r}
            sub = Graph(g.n, [e for e in g.edges if e[0] in ball and e[1] in ball])
            cyc = sub.edges - bridges_lowlink(sub)
            for e in cyc:
                if r < best.get(e, g.n):
                    best[e] = r
    return max(best.values(), default=0)

