"""Simplex graphs: which (d+1)-cliques carry full-dimensional data, and how
they glue along shared faces.

A (d+1)-clique whose polarized Gram block is affinely independent spans a
nondegenerate d-simplex.  Two such simplices become adjacent when they share
exactly d vertices and the shared vectors are linearly independent, which is
what lets a rigid motion propagate from one to the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gram import PD_REL_TOL, affinely_independent, linearly_independent, polarize
from .graphs import MagnitudeObservation, SimpleGraph

__all__ = [
    "SimplexGraph",
    "UniquenessReport",
    "enumerate_cliques",
    "build_simplex_graph",
    "check_uniqueness_hypotheses",
]


def enumerate_cliques(graph: SimpleGraph, k: int) -> list[tuple[int, ...]]:
    """All k-cliques of the graph, each once, in lexicographic order."""
    if k < 1:
        raise ValueError("clique size must be positive")
    n = graph.vertex_count
    adj = [set() for _ in range(n)]
    for i, j in graph.edges:
        adj[i].add(j)
        adj[j].add(i)
    out: list[tuple[int, ...]] = []

    def extend(clique: list[int], candidates: list[int]) -> None:
        if len(clique) == k:
            out.append(tuple(clique))
            return
        need = k - len(clique)
        for pos, v in enumerate(candidates):
            if len(candidates) - pos < need:
                break
            clique.append(v)
            extend(clique, [w for w in candidates[pos + 1 :] if w in adj[v]])
            clique.pop()

    extend([], list(range(n)))
    return out


@dataclass(frozen=True)
class SimplexGraph:
    """Nondegenerate d-simplices of an observation and their gluing edges.

    ``edges`` holds index pairs into ``simplices`` (i < j, sorted).
    """

    dim: int
    simplices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]


def build_simplex_graph(
    graph: SimpleGraph,
    obs: MagnitudeObservation,
    dim: int,
    tol: float = PD_REL_TOL,
) -> SimplexGraph:
    """Simplex graph of an observation for target dimension ``dim``.

    Vertices: (dim+1)-cliques whose Gram block is affinely independent.
    Edges: pairs sharing exactly ``dim`` graph vertices whose shared Gram
    block is (strictly) linearly independent.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    if obs.vertex_count != graph.vertex_count:
        raise ValueError("observation and graph disagree on vertex count")
    gram = polarize(obs)
    simplices = [
        cl
        for cl in enumerate_cliques(graph, dim + 1)
        if affinely_independent(gram.block(cl), tol)
    ]
    # index simplices by their d-element faces: two distinct (d+1)-sets share
    # exactly d vertices iff they share a d-face
    by_face: dict[tuple[int, ...], list[int]] = {}
    for s_idx, simplex in enumerate(simplices):
        for face in combinations(simplex, dim):
            by_face.setdefault(face, []).append(s_idx)
    edges = set()
    for face, members in by_face.items():
        if len(members) < 2:
            continue
        if not linearly_independent(gram.block(face), tol):
            continue
        for a, b in combinations(members, 2):
            edges.add((a, b))
    return SimplexGraph(dim=dim, simplices=tuple(simplices), edges=tuple(sorted(edges)))


@dataclass(frozen=True)
class UniquenessReport:
    """Connectivity and coverage of a simplex graph.

    When the simplex graph is connected and every vertex of the base graph
    lies in some simplex, the observation determines the field up to one
    orthogonal matrix.
    """

    connected: bool
    uncovered: tuple[int, ...]
    certified: bool


def check_uniqueness_hypotheses(sg: SimplexGraph, graph: SimpleGraph) -> UniquenessReport:
    """Check the two hypotheses of the uniqueness certificate."""
    count = len(sg.simplices)
    covered: set[int] = set()
    for simplex in sg.simplices:
        covered.update(simplex)
    uncovered = tuple(v for v in range(graph.vertex_count) if v not in covered)
    if count == 0:
        return UniquenessReport(connected=False, uncovered=uncovered, certified=False)
    parent = list(range(count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in sg.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    connected = len({find(i) for i in range(count)}) == 1
    return UniquenessReport(
        connected=connected,
        uncovered=uncovered,
        certified=connected and not uncovered,
    )
