"""Brute-force ground truth for small instances.

Enumerates all 2^(m*n) vertex subsets with bitmask arithmetic and bins the
dominating ones by size.  Completely independent of the sweep engine: the
graph is built edge by edge from the family definition, and domination is
checked against explicit closed neighborhoods.  Useful up to about twenty
vertices; a hard cap refuses anything past twenty-four.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import GraphSpec
from .errors import GuardExceeded
from .rings import EXACT, Polynomial

HARD_CELL_CAP = 24
DEFAULT_CELL_GUARD = 20


@dataclass(frozen=True)
class AdjacencyGraph:
    vertex_count: int
    neighbors: tuple[frozenset, ...]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.neighbors) // 2


def build_graph(spec: GraphSpec) -> AdjacencyGraph:
    """Adjacency lists for the instance; vertex id = row * m + column.

    Wrap edges are added through a set union, so a wrapped dimension of
    length one adds no self-loop and length two no duplicate edge.
    """
    m, n = spec.m, spec.n
    nb = [set() for _ in range(m * n)]

    def add(u: int, v: int) -> None:
        if u != v:
            nb[u].add(v)
            nb[v].add(u)

    wrap_m = spec.family in ("cylinder", "torus")
    wrap_n = spec.family == "torus"
    for r in range(n):
        for c in range(m):
            v = r * m + c
            if c + 1 < m:
                add(v, v + 1)
            elif wrap_m:
                add(v, r * m)
            if r + 1 < n:
                add(v, v + m)
            elif wrap_n:
                add(v, c)
            if spec.family == "king":
                for dc in (-1, 1):
                    rr, cc = r + 1, c + dc
                    if 0 <= rr < n and 0 <= cc < m:
                        add(v, rr * m + cc)
    return AdjacencyGraph(m * n, tuple(frozenset(s) for s in nb))


def _closed_masks(graph: AdjacencyGraph) -> np.ndarray:
    masks = np.empty(graph.vertex_count, dtype=np.uint64)
    for v, nbrs in enumerate(graph.neighbors):
        acc = 1 << v
        for u in nbrs:
            acc |= 1 << u
        masks[v] = acc
    return masks


def is_dominating(graph: AdjacencyGraph, subset: int) -> bool:
    """Does the vertex bitmask `subset` dominate the graph?"""
    for v, nbrs in enumerate(graph.neighbors):
        closed = 1 << v
        for u in nbrs:
            closed |= 1 << u
        if not subset & closed:
            return False
    return True


def brute_force_polynomial(spec: GraphSpec,
                           cell_guard: int = DEFAULT_CELL_GUARD) -> Polynomial:
    """Domination polynomial by exhaustive subset enumeration."""
    cells = spec.cells
    if cells > HARD_CELL_CAP:
        raise GuardExceeded(
            f"{cells} vertices exceeds the hard enumeration cap of "
            f"{HARD_CELL_CAP}")
    if cells > cell_guard:
        raise GuardExceeded(
            f"{cells} vertices exceeds cell_guard={cell_guard}; "
            f"raise it explicitly if you really want 2^{cells} subsets")
    graph = build_graph(spec)
    subsets = np.arange(1 << cells, dtype=np.uint64)
    dominating = np.ones(len(subsets), dtype=bool)
    for closed in _closed_masks(graph):
        dominating &= (subsets & closed) != 0
    sizes = np.bitwise_count(subsets[dominating]).astype(np.int64)
    coeffs = np.bincount(sizes, minlength=cells + 1)
    return Polynomial.from_coefficients([int(c) for c in coeffs], EXACT)
