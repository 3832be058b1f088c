"""Input validation helpers shared by solvers and estimators."""

from __future__ import annotations

import numpy as np

from .errors import DataError, DimensionError
from .graphs import Graph


def as_float_array(x, name: str = "array") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite entries")
    return arr


def check_vector_signal(x, graph: Graph, name: str = "signal") -> np.ndarray:
    """Validate an (N, d) real signal against the graph; returns float64."""
    arr = as_float_array(x, name)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-d (N, d), got shape {arr.shape}")
    if arr.shape[0] != graph.num_vertices:
        raise DimensionError(
            f"{name} has {arr.shape[0]} rows, graph has {graph.num_vertices} vertices"
        )
    return arr


def check_matrix_signal(x, graph: Graph, name: str = "signal") -> np.ndarray:
    """Validate an (N, d, k) signal with k <= d against the graph."""
    arr = as_float_array(x, name)
    if arr.ndim != 3:
        raise DimensionError(f"{name} must be 3-d (N, d, k), got shape {arr.shape}")
    if arr.shape[0] != graph.num_vertices:
        raise DimensionError(
            f"{name} has {arr.shape[0]} slices, graph has {graph.num_vertices} vertices"
        )
    if arr.shape[2] > arr.shape[1]:
        raise DimensionError(f"{name} needs k <= d, got shape {arr.shape}")
    return arr


def check_edge_coupling(L, graph: Graph, k: int, name: str = "coupling") -> np.ndarray:
    """Validate an (M, k, k) per-edge field against the graph."""
    arr = as_float_array(L, name)
    if arr.shape != (graph.num_edges, k, k):
        raise DimensionError(
            f"{name} must have shape ({graph.num_edges}, {k}, {k}), got {arr.shape}"
        )
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "signals") -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what} have mismatched shapes {a.shape} vs {b.shape}")
