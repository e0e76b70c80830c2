"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numpy as np

from .exceptions import GraphError
from .graph import Edge, Graph, require_connected


def check_graph(X, n_nodes=None, require_connected_graph: bool = True) -> Graph:
    """Coerce ``X`` into a :class:`Graph`.

    Accepts a ``Graph``, a networkx-like object exposing ``number_of_nodes``
    and ``edges``, or an integer array-like of shape ``(n_edges, 2)``; for the
    array form ``n_nodes`` defaults to ``max id + 1``.
    """
    if isinstance(X, Graph):
        g = X
    elif hasattr(X, "number_of_nodes") and hasattr(X, "edges"):
        nodes = set(X.nodes())
        if nodes != set(range(len(nodes))):
            raise GraphError("networkx input must use nodes labelled 0..n-1")
        g = Graph(len(nodes), X.edges())
    else:
        arr = np.asarray(X)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError(f"expected an edge array of shape (n_edges, 2), got {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.mod(arr, 1) == 0):
                raise GraphError("edge endpoints must be integers")
            arr = arr.astype(np.int64)
        if (arr < 0).any():
            raise GraphError("node ids must be non-negative")
        n = int(arr.max()) + 1 if len(arr) else 1
        if n_nodes is not None:
            if n_nodes < n:
                raise GraphError(f"n_nodes={n_nodes} but edges mention node {n - 1}")
            n = n_nodes
        g = Graph(n, arr.tolist())
    if require_connected_graph:
        require_connected(g)
    return g


def check_edges(edges, g: Graph) -> list[Edge]:
    """Validate an edge array-like against ``g``; returns canonical edges."""
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    out = []
    for u, v in arr.tolist():
        if not g.has_edge(u, v):
            raise GraphError(f"edge ({u}, {v}) not in graph")
        out.append((min(u, v), max(u, v)))
    return out


def check_initiator(initiator, g: Graph, allow_all: bool = False):
    if initiator == "all":
        if not allow_all:
            raise GraphError("this mode needs a single initiator node")
        return "all"
    if isinstance(initiator, (bool, np.bool_)) or not isinstance(initiator, (int, np.integer)):
        raise GraphError(f"initiator must be a node id, got {initiator!r}")
    if not 0 <= int(initiator) < g.n:
        raise GraphError(f"initiator {initiator} is not a node of a graph on {g.n} nodes")
    return int(initiator)
