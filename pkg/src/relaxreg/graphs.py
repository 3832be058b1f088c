"""Undirected graphs carrying the signals to be denoised.

Vertices are labelled 0..N-1 (documentation elsewhere may speak 1-based;
storage is offset by one). Edges are pairs (n, m) with n < m, kept sorted
lexicographically so iteration order is deterministic.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ParameterError, TopologyError


class Graph:
    """Connected undirected graph with a fixed, sorted edge list.

    Attributes
    ----------
    num_vertices : int
        Number of vertices N.
    edges : (M, 2) int ndarray
        Edge endpoints, each row (n, m) with n < m, sorted lexicographically.
    adjacency : tuple of tuples
        For each vertex, the indices of its incident edges.
    degrees : (N,) int ndarray
        Number of neighbours of each vertex.
    incidence : (M, N) CSR matrix
        Signed incidence: row e has +1 at column n and -1 at column m.

    Instances are immutable after construction and safe to share across
    threads.
    """

    def __init__(self, num_vertices: int, edges) -> None:
        n = int(num_vertices)
        if n < 1:
            raise ParameterError(f"num_vertices must be >= 1, got {num_vertices}")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ParameterError("edge endpoint out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ParameterError("edges must satisfy n < m")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            if np.any(np.all(edges[1:] == edges[:-1], axis=1)):
                raise ParameterError("duplicate edge")
        self.num_vertices = n
        self.edges = edges
        self.num_edges = edges.shape[0]

        m = self.num_edges
        data = np.empty(2 * m)
        data[:m] = 1.0
        data[m:] = -1.0
        rows = np.concatenate([np.arange(m), np.arange(m)])
        cols = np.concatenate([edges[:, 0], edges[:, 1]])
        self.incidence = sp.csr_matrix((data, (rows, cols)), shape=(m, n))
        self.incidence_t = sp.csr_matrix(self.incidence.T)

        self.degrees = np.zeros(n, dtype=np.int64)
        np.add.at(self.degrees, edges[:, 0], 1)
        np.add.at(self.degrees, edges[:, 1], 1)

        adj: list[list[int]] = [[] for _ in range(n)]
        for e, (a, b) in enumerate(edges):
            adj[a].append(e)
            adj[b].append(e)
        self.adjacency = tuple(tuple(v) for v in adj)

        if n > 1:
            und = sp.csr_matrix(
                (np.ones(m), (edges[:, 0], edges[:, 1])), shape=(n, n)
            )
            ncomp, _ = connected_components(und, directed=False)
            if ncomp != 1:
                raise TopologyError(f"graph is disconnected ({ncomp} components)")

        # chains get an exact TV prox; detect once
        self.is_chain = m == n - 1 and bool(
            np.all(edges[:, 0] == np.arange(m)) and np.all(edges[:, 1] == np.arange(1, n))
        )
        self.edges.setflags(write=False)
        self.degrees.setflags(write=False)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(N={self.num_vertices}, M={self.num_edges})"


def build_chain(n: int) -> Graph:
    """Path graph on n vertices: edges (i, i+1) for i = 0..n-2."""
    n = int(n)
    if n < 1:
        raise ParameterError(f"chain length must be >= 1, got {n}")
    idx = np.arange(n - 1)
    return Graph(n, np.column_stack([idx, idx + 1]))


def build_grid(height: int, width: int) -> Graph:
    """4-neighbour grid graph, vertices in row-major order."""
    h, w = int(height), int(width)
    if h < 1 or w < 1:
        raise ParameterError(f"grid dimensions must be >= 1, got {height}x{width}")
    ids = np.arange(h * w).reshape(h, w)
    horiz = np.column_stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()])
    vert = np.column_stack([ids[:-1, :].ravel(), ids[1:, :].ravel()])
    return Graph(h * w, np.vstack([horiz, vert]))


def neighbor_count(graph: Graph, n: int) -> int:
    """Number of vertices adjacent to vertex n."""
    n = int(n)
    if n < 0 or n >= graph.num_vertices:
        raise IndexError(f"vertex {n} out of range for N={graph.num_vertices}")
    return int(graph.degrees[n])
