"""Estimator wrappers so the protocols compose with scikit-learn tooling.

Edge-biconnected components are a clustering of the nodes, so
:class:`EdgeBiconnectivity` follows the ``ClusterMixin`` contract:
``fit(graph)`` sets ``labels_`` and ``fit_predict`` returns them.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .graph import diameter
from .local import HorizonExhausted, classification_correct_round, doubling_run, run_local
from .oracles import bridges_oracle
from .protocol import run_biconnectivity
from .validation import check_edges, check_graph, check_initiator


class EdgeBiconnectivity(ClusterMixin, BaseEstimator):
    """Distributed edge-biconnectivity, simulated in the CONGEST model.

    Parameters
    ----------
    initiator : int, default=0
        The leader node that starts the protocol.
    max_rounds : int, default=10000
        Round budget before the run is declared non-terminating.
    reverse_order : bool, default=False
        Step nodes in descending id order; results must not change.

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
        Component label per node (the preorder label of the component's top node).
    bridges_ : list of (int, int)
    cycle_edges_ : list of (int, int)
    parent_ : ndarray of shape (n_nodes,)
        BFS-tree parent, ``-1`` at the root.
    pre_labels_ : ndarray of shape (n_nodes,)
    metrics_ : Metrics
    n_rounds_ : int
    result_ : BiconResult
    """

    def __init__(self, initiator=0, max_rounds=10_000, reverse_order=False):
        self.initiator = initiator
        self.max_rounds = max_rounds
        self.reverse_order = reverse_order

    def fit(self, X, y=None):
        g = check_graph(X)
        init = check_initiator(self.initiator, g)
        res, _ = run_biconnectivity(g, init, max_rounds=self.max_rounds,
                                    reverse_order=self.reverse_order)
        self.graph_ = g
        self.result_ = res
        self.labels_ = np.asarray(res.classification.component_label, dtype=np.int64)
        self.bridges_ = sorted(res.classification.bridges)
        self.cycle_edges_ = sorted(res.classification.cycle_edges)
        self.parent_ = np.array([-1 if p is None else p for p in res.parent], dtype=np.int64)
        self.pre_labels_ = np.asarray(res.pre_label, dtype=np.int64)
        self.metrics_ = res.metrics
        self.n_rounds_ = res.metrics.rounds
        return self

    def is_bridge(self, edges) -> np.ndarray:
        """Boolean mask: which of the given edges are bridges of the fitted graph."""
        check_is_fitted(self, "labels_")
        canon = check_edges(edges, self.graph_)
        return np.array([self.labels_[u] != self.labels_[v] for u, v in canon], dtype=bool)


class LocalBridgeFinder(BaseEstimator):
    """All-initiated flooding bridge finder with unbounded messages.

    Parameters
    ----------
    n_rounds : int or None, default=None
        Rounds to run; ``None`` runs ``Diam + 1`` rounds, after which every node
        knows the whole graph.
    schedule : {"fixed", "doubling"}, default="fixed"
        ``"doubling"`` additionally runs the guess-doubling schedule and stores
        its report in ``doubling_``.

    Attributes
    ----------
    bridges_ : list of (int, int)
        Edges still assumed to be bridges by at least one endpoint.
    correct_round_ : int or None
        First round from which the endpoint classification matches the oracle;
        ``None`` when it never does within ``n_rounds``.
    run_ : LocalRun
    doubling_ : DoublingReport or None
    """

    def __init__(self, n_rounds=None, schedule="fixed"):
        self.n_rounds = n_rounds
        self.schedule = schedule

    def fit(self, X, y=None):
        if self.schedule not in ("fixed", "doubling"):
            raise ValueError(f"schedule must be 'fixed' or 'doubling', got {self.schedule!r}")
        g = check_graph(X)
        d = diameter(g)
        rounds = d + 1 if self.n_rounds is None else int(self.n_rounds)
        truth = bridges_oracle(g)
        run, _ = run_local(g, rounds)
        self.graph_ = g
        self.run_ = run
        self.bridges_ = sorted(run.endpoint_bridges())
        try:
            self.correct_round_ = classification_correct_round(run, truth)
        except HorizonExhausted:
            self.correct_round_ = None
        self.doubling_ = doubling_run(g, 8 * (d + 1), truth) if self.schedule == "doubling" else None
        return self

    def is_bridge(self, edges) -> np.ndarray:
        check_is_fitted(self, "bridges_")
        canon = check_edges(edges, self.graph_)
        found = set(self.bridges_)
        return np.array([e in found for e in canon], dtype=bool)
