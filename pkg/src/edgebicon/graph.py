"""Undirected simple graphs: representation, edge-list I/O, generators, DOT export."""

from __future__ import annotations

import random
from collections import deque
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

from .exceptions import DisconnectedGraphError, GraphError

if TYPE_CHECKING:
    from .oracles import EdgeClassification

Edge = tuple[int, int]

GENERATOR_KINDS = ("path", "cycle", "star", "complete", "tree", "barbell", "random_connected")


def edge(u: int, v: int) -> Edge:
    """Canonical (low, high) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Neighbor lists are sorted ascending; protocol determinism relies on it.
    """

    __slots__ = ("_n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphError(f"node count must be non-negative, got {n}")
        canon = set()
        for pair in edges:
            u, v = (int(x) for x in pair)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            canon.add(edge(u, v))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self._n = n
        self._edges = frozenset(canon)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self._edges

    def nodes(self) -> range:
        return range(self._n)

    def without_edge(self, u: int, v: int) -> "Graph":
        e = edge(u, v)
        if e not in self._edges:
            raise GraphError(f"edge {e} not in graph")
        return Graph(self._n, self._edges - {e})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())


# --- edge-list format -------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment line.

    The node count is inferred as ``max_id + 1``.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two node ids, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: node ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: node ids must be non-negative")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at node {u}")
        pairs.append((u, v))
    if not pairs:
        raise GraphError("edge list is empty; node count cannot be inferred")
    n = max(max(p) for p in pairs) + 1
    return Graph(n, pairs)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.sorted_edges())


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


# --- traversal ----------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable nodes get -1."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return min(bfs_distances(g, 0)) >= 0


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError()


def distance_matrix(g: Graph) -> list[list[int]]:
    return [bfs_distances(g, v) for v in g.nodes()]


def diameter(g: Graph) -> int:
    require_connected(g)
    return max((max(row) for row in distance_matrix(g)), default=0)


# --- generators -----------------------------------------------------------------

def _random_tree_edges(n: int, rng: random.Random) -> list[Edge]:
    # random recursive tree over a shuffled labeling
    order = list(range(n))
    rng.shuffle(order)
    return [edge(order[i], order[rng.randrange(i)]) for i in range(1, n)]


def random_connected(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) sample, augmented with one random edge per extra component."""
    if n < 1:
        raise GraphError("random_connected needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    g = Graph(n, edges)
    comps = _components(g)
    if len(comps) > 1:
        attached = list(comps[0])
        for comp in comps[1:]:
            edges.add(edge(rng.choice(comp), rng.choice(attached)))
            attached.extend(comp)
        g = Graph(n, edges)
    return g


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in g.nodes():
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def generate(kind: str, *params, seed: int = 0) -> Graph:
    """Deterministic generator for the test corpus.

    ``path n``, ``cycle n``, ``star n``, ``complete n``, ``tree n`` (random),
    ``barbell k`` (two k-cliques joined by ``(k-1, k)``) and
    ``random_connected n p``.
    """
    if kind not in GENERATOR_KINDS:
        raise GraphError(f"unknown generator {kind!r}; choose from {', '.join(GENERATOR_KINDS)}")
    expected = 2 if kind == "random_connected" else 1
    if len(params) != expected:
        raise GraphError(f"{kind} takes {expected} parameter(s), got {len(params)}")
    size = int(params[0])
    if size < 1:
        raise GraphError(f"{kind} size must be >= 1, got {size}")

    if kind == "path":
        return Graph(size, [(i, i + 1) for i in range(size - 1)])
    if kind == "cycle":
        if size < 3:
            raise GraphError("a simple cycle needs n >= 3")
        return Graph(size, [(i, (i + 1) % size) for i in range(size)])
    if kind == "star":
        return Graph(size, [(0, i) for i in range(1, size)])
    if kind == "complete":
        return Graph(size, [(u, v) for u in range(size) for v in range(u + 1, size)])
    if kind == "tree":
        return Graph(size, _random_tree_edges(size, random.Random(seed)))
    if kind == "barbell":
        k = size
        clique = [(u, v) for u in range(k) for v in range(u + 1, k)]
        return Graph(2 * k, clique + [(u + k, v + k) for u, v in clique] + [(k - 1, k)])
    return random_connected(size, float(params[1]), seed)


def parse_generator_spec(spec: str) -> tuple[str, list[str]]:
    """Split ``kind:p1,p2`` into its parts."""
    kind, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p] if rest else []
    return kind.strip(), params


def attach_gadget(g: Graph, e: Sequence[int]) -> Graph:
    """Subdivide ``e`` with a new node ``w`` and hang bridge/cycle decorations on it.

    New nodes ``w, p, t1, t2, s1, s2, s3`` get ids ``n..n+6`` in that order:
    ``w-p`` is a pendant bridge, ``w-t1-t2`` a triangle through ``w`` and
    ``s1-s2-s3`` a triangle hung off ``w`` by the bridge ``w-s1``.
    """
    u, v = int(e[0]), int(e[1])
    if not g.has_edge(u, v):
        raise GraphError(f"edge {edge(u, v)} not in graph")
    w, p, t1, t2, s1, s2, s3 = range(g.n, g.n + 7)
    added = [(u, w), (w, v), (w, p), (w, t1), (w, t2), (t1, t2),
             (w, s1), (s1, s2), (s1, s3), (s2, s3)]
    return Graph(g.n + 7, (g.edges - {edge(u, v)}) | {edge(a, b) for a, b in added})


def gadget_edges(n_before: int, e: Sequence[int]) -> list[Edge]:
    """The ten edges :func:`attach_gadget` adds for an input with ``n_before`` nodes."""
    u, v = int(e[0]), int(e[1])
    w, p, t1, t2, s1, s2, s3 = range(n_before, n_before + 7)
    return [edge(a, b) for a, b in [(u, w), (w, v), (w, p), (w, t1), (w, t2), (t1, t2),
                                    (w, s1), (s1, s2), (s1, s3), (s2, s3)]]


# --- DOT ----------------------------------------------------------------------------

def to_dot(g: Graph, result: Optional["EdgeClassification"] = None) -> str:
    """Render as Graphviz DOT; output is byte-stable for identical inputs."""
    lines = ["graph G {", "  node [shape=circle];"]
    if result is not None:
        palette = {lab: i % 12 + 1 for i, lab in enumerate(sorted(set(result.component_label)))}
        for v in g.nodes():
            lab = result.component_label[v]
            lines.append(
                f'  {v} [style=filled, colorscheme=set312, fillcolor={palette[lab]}, '
                f'group="c{lab}"];'
            )
    bridges = result.bridges if result is not None else frozenset()
    for u, v in g.sorted_edges():
        if (u, v) in bridges:
            lines.append(f'  {u} -- {v} [style=dashed, label="bridge"];')
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
