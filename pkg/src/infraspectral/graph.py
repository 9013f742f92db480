"""Weighted infrastructure graphs and the matrices derived from them.

A network (power grid, water distribution system) is held as an
:class:`InfraGraph`: vertices ``0..N-1`` plus a list of weighted edges with
a fixed but arbitrary orientation.  Edge weights are complex (branch
admittances) or real (hydraulic conductances).  From the graph we derive
the complex adjacency and incidence matrices, the nonnegative "underlying"
adjacency built from weight moduli, and its Laplacian, which is the
operator every spectral computation in this package is based on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Edge = tuple[int, int, complex]


@dataclass(frozen=True)
class InfraGraph:
    """Undirected weighted graph on vertices ``0..vertex_count-1``.

    Each edge is stored once as ``(tail, head, weight)``; the orientation is
    fixed by input order and carries no physical meaning.  Self-loops are
    rejected, at most one edge may join a vertex pair (parallel inputs are
    merged upstream by the ingestion layer), and every weight must have
    nonzero modulus.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    name: str = ""

    def __post_init__(self):
        n = self.vertex_count
        if not isinstance(n, int) or n <= 0:
            raise ValueError(f"vertex_count must be a positive integer, got {n!r}")
        normalized = tuple((int(t), int(h), complex(w)) for t, h, w in self.edges)
        object.__setattr__(self, "edges", normalized)
        seen: set[frozenset[int]] = set()
        for i, (tail, head, weight) in enumerate(normalized):
            if not (0 <= tail < n and 0 <= head < n):
                raise ValueError(
                    f"edge {i}: endpoints ({tail}, {head}) outside [0, {n})"
                )
            if tail == head:
                raise ValueError(f"edge {i}: self-loop at vertex {tail}")
            pair = frozenset((tail, head))
            if pair in seen:
                raise ValueError(
                    f"edge {i}: duplicate edge between {tail} and {head}; "
                    "parallel edges must be merged before graph construction"
                )
            seen.add(pair)
            if abs(weight) == 0.0:
                raise ValueError(f"edge {i}: weight has zero modulus")

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class UnderlyingLaplacian:
    """Real symmetric PSD Laplacian of the underlying nonnegative adjacency.

    ``zero_tolerance`` is the relative threshold (against the largest
    eigenvalue) below which an eigenvalue is treated as zero when counting
    connected components and locating constant harmonics.
    """

    matrix: np.ndarray
    zero_tolerance: float = 1e-9
    graph_name: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Laplacian must be square, got shape {m.shape}")
        if self.zero_tolerance < 0:
            raise ValueError("zero_tolerance must be nonnegative")
        diag = np.diag(m)
        if np.any(diag < 0):
            raise ValueError("Laplacian has a negative diagonal entry")
        off = m - np.diag(diag)
        if np.any(off > 0):
            raise ValueError("Laplacian has a positive off-diagonal entry")
        scale = diag.max() if m.size and diag.max() > 0 else 1.0
        row_sums = m.sum(axis=1)
        if np.any(np.abs(row_sums) > 1e-9 * scale):
            raise ValueError("Laplacian row sums are not zero within tolerance")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def vertex_count(self) -> int:
        return self.matrix.shape[0]


def adjacency_matrix(g: InfraGraph) -> np.ndarray:
    """Complex adjacency: entry (k, l) is the weight of edge {k, l}, else 0.

    The stored orientation is arbitrary, so the weight is placed
    symmetrically at both (tail, head) and (head, tail).
    """
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=complex)
    for tail, head, weight in g.edges:
        a[tail, head] = weight
        a[head, tail] = weight
    return a


def incidence_matrix(g: InfraGraph) -> np.ndarray:
    """Weighted directed incidence matrix, one column per edge in stored order.

    Column l holds +w_l at the head row and -w_l at the tail row.  For an
    admittance-weighted grid this is the operator relating branch currents
    to vertex potentials.
    """
    b = np.zeros((g.vertex_count, g.edge_count), dtype=complex)
    for col, (tail, head, weight) in enumerate(g.edges):
        b[head, col] = weight
        b[tail, col] = -weight
    return b


def underlying_adjacency(g: InfraGraph) -> np.ndarray:
    """Real nonnegative adjacency: entry (k, l) is the modulus of the edge weight."""
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=float)
    for tail, head, weight in g.edges:
        mod = abs(weight)
        a[tail, head] = mod
        a[head, tail] = mod
    return a


def underlying_laplacian(g: InfraGraph, zero_tolerance: float = 1e-9) -> UnderlyingLaplacian:
    """Laplacian L = D - A of the underlying adjacency, D = diag(row sums).

    Symmetric and positive semidefinite by construction; the number of
    zero eigenvalues equals the number of connected components.
    """
    a = underlying_adjacency(g)
    lap = np.diag(a.sum(axis=1)) - a
    return UnderlyingLaplacian(lap, zero_tolerance=zero_tolerance, graph_name=g.name)


def connected_components(g: InfraGraph) -> list[list[int]]:
    """Partition of vertex indices into connected components.

    Components are sorted by their smallest vertex; vertices within a
    component are sorted ascending.
    """
    parent = list(range(g.vertex_count))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for tail, head, _ in g.edges:
        rt, rh = find(tail), find(head)
        if rt != rh:
            parent[rh] = rt

    blocks: dict[int, list[int]] = {}
    for v in range(g.vertex_count):
        blocks.setdefault(find(v), []).append(v)
    return sorted(blocks.values(), key=lambda block: block[0])
