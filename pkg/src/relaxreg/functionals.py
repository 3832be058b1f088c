"""Objectives and seminorms evaluated on graph signals.

All model objectives here use the linearized fidelity -<x_n, y_n>: for
signals constrained to a set on which ||x_n|| is constant, it differs
from the squared distance 1/2 ||x_n - y_n||^2 only by a data constant.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph
from .validation import (
    check_edge_coupling,
    check_matrix_signal,
    check_same_shape,
    check_vector_signal,
)


def _edgewise_l1(values: np.ndarray, graph: Graph) -> float:
    """Sum over edges of the entrywise l1 difference of node values."""
    e = graph.edges
    if e.size == 0:
        return 0.0
    diff = values[e[:, 0]] - values[e[:, 1]]
    return float(np.abs(diff).sum())


def tv_seminorm_vector(x, graph: Graph) -> float:
    """Anisotropic graph TV of an (N, d) signal: sum_e ||x_n - x_m||_1."""
    arr = check_vector_signal(x, graph, "x")
    return _edgewise_l1(arr, graph)


def tv_seminorm_matrix(x, graph: Graph) -> float:
    """Anisotropic graph TV of an (N, d, k) signal using the 1,1-norm per edge."""
    arr = check_matrix_signal(x, graph, "x")
    return _edgewise_l1(arr, graph)


def objective_binary(x, y, lam: float, graph: Graph) -> float:
    """-sum_n <x_n, y_n> + lam * TV(x) for (N, d) signals."""
    xa = check_vector_signal(x, graph, "x")
    ya = check_vector_signal(y, graph, "y")
    check_same_shape(xa, ya)
    return float(-(xa * ya).sum() + lam * _edgewise_l1(xa, graph))


def objective_stiefel_tv(x, y, lam: float, graph: Graph) -> float:
    """-sum_n <X_n, Y_n>_F + lam * TV(X) for (N, d, k) signals."""
    xa = check_matrix_signal(x, graph, "x")
    ya = check_matrix_signal(y, graph, "y")
    check_same_shape(xa, ya)
    return float(-(xa * ya).sum() + lam * _edgewise_l1(xa, graph))


def objective_tikhonov(x, L, y, lam: float, graph: Graph) -> float:
    """-sum_n <X_n, Y_n>_F - lam * sum_e <L_e, ones(k,k)>_F.

    The edge term carries the regularization weight so that the value is
    the one the semidefinite ADMM solver actually decreases.
    """
    xa = check_matrix_signal(x, graph, "x")
    ya = check_matrix_signal(y, graph, "y")
    check_same_shape(xa, ya)
    k = xa.shape[2]
    La = check_edge_coupling(L, graph, k, "L")
    return float(-(xa * ya).sum() - lam * La.sum())
