"""Vector fields on finite simple graphs and their magnitude observations.

A vector field assigns one vector in R^d to every vertex of a graph.  An
observation keeps only the vertex norms ||f_i|| and the relative norms
||f_i - f_j|| along edges.  Applying a single orthogonal matrix to every
vector preserves the observation; ``orbit_equivalent`` decides whether two
fields differ by exactly such a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SimpleGraph",
    "VectorField",
    "MagnitudeObservation",
    "default_tolerance",
    "observe",
    "orbit_equivalent",
]


def default_tolerance(max_norm: float) -> float:
    """Tolerance used when the caller gives none: 1e-8 * (1 + max norm)."""
    return 1e-8 * (1.0 + float(max_norm))


def _canonical_edges(vertex_count: int, edges) -> tuple[tuple[int, int], ...]:
    seen = set()
    out = []
    for e in edges:
        if len(e) != 2:
            raise ValueError(f"edge {e!r} is not a pair")
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise ValueError(f"loop edge ({i}, {i}) not allowed")
        if not (0 <= i < vertex_count and 0 <= j < vertex_count):
            raise ValueError(f"edge ({i}, {j}) out of range for {vertex_count} vertices")
        key = (i, j) if i < j else (j, i)
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    return tuple(sorted(out))


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 0..vertex_count-1.

    Edges are stored sorted with i < j; loops and duplicates are rejected.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if int(self.vertex_count) < 0:
            raise ValueError("vertex_count must be nonnegative")
        object.__setattr__(self, "vertex_count", int(self.vertex_count))
        object.__setattr__(self, "edges", _canonical_edges(self.vertex_count, self.edges))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    def has_edge(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self._edge_set()

    def _edge_set(self) -> frozenset:
        # cached lazily; frozen dataclass, so stash via object.__setattr__
        cached = self.__dict__.get("_edges_frozen")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edges_frozen", cached)
        return cached

    def neighbors(self, i: int) -> tuple[int, ...]:
        out = [b for a, b in self.edges if a == i] + [a for a, b in self.edges if b == i]
        return tuple(sorted(out))

    @property
    def is_complete(self) -> bool:
        n = self.vertex_count
        return len(self.edges) == n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class VectorField:
    """One vector in R^d per vertex, stored as a read-only (n, d) array."""

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vectors, dtype=float)
        if arr.ndim != 2:
            raise ValueError("vectors must form an (n, d) array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("vectors must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def vertex_count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def max_norm(self) -> float:
        if self.vertex_count == 0:
            return 0.0
        return float(np.max(np.linalg.norm(self.vectors, axis=1)))


@dataclass(frozen=True, eq=False)
class MagnitudeObservation:
    """Vertex norms plus edge-difference norms, the data reconstruction sees.

    ``edge_norms`` maps canonical edges (i, j), i < j, to ||f_i - f_j||.
    Negative magnitudes are rejected outright; triangle-infeasible entries
    are kept but can be listed via :meth:`triangle_violations`.
    """

    dim: int
    vertex_norms: np.ndarray
    edge_norms: dict

    def __post_init__(self):
        norms = np.array(self.vertex_norms, dtype=float)
        if norms.ndim != 1:
            raise ValueError("vertex_norms must be a 1-D array")
        if not np.all(np.isfinite(norms)):
            raise ValueError("vertex_norms must be finite")
        if np.any(norms < 0):
            raise ValueError("vertex norms must be nonnegative")
        norms.setflags(write=False)
        n = norms.shape[0]
        cleaned = {}
        for key, value in self.edge_norms.items():
            i, j = int(key[0]), int(key[1])
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge key {key!r} invalid for {n} vertices")
            v = float(value)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"edge norm for {key!r} must be finite and nonnegative")
            cleaned[(i, j) if i < j else (j, i)] = v
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "vertex_norms", norms)
        object.__setattr__(self, "edge_norms", cleaned)

    @property
    def vertex_count(self) -> int:
        return self.vertex_norms.shape[0]

    def max_norm(self) -> float:
        return float(np.max(self.vertex_norms)) if self.vertex_count else 0.0

    def triangle_violations(self, tol: float | None = None) -> tuple[tuple[int, int, float], ...]:
        """Edges whose relative norm cannot come from any pair of vectors.

        For any vectors, | ||f_i|| - ||f_j|| | <= ||f_i - f_j|| <= ||f_i|| + ||f_j||.
        Returns (i, j, gap) triples where the bound fails by more than tol.
        """
        if tol is None:
            tol = default_tolerance(self.max_norm())
        out = []
        for (i, j), dist in sorted(self.edge_norms.items()):
            lo = abs(float(self.vertex_norms[i]) - float(self.vertex_norms[j]))
            hi = float(self.vertex_norms[i]) + float(self.vertex_norms[j])
            gap = max(lo - dist, dist - hi)
            if gap > tol:
                out.append((i, j, gap))
        return tuple(out)


def observe(graph: SimpleGraph, field: VectorField) -> MagnitudeObservation:
    """Record vertex norms and edge-difference norms of a field on a graph."""
    if field.vertex_count != graph.vertex_count:
        raise ValueError("field and graph disagree on the number of vertices")
    vecs = field.vectors
    norms = np.linalg.norm(vecs, axis=1)
    edge_norms = {}
    for i, j in graph.edges:
        edge_norms[(i, j)] = float(np.linalg.norm(vecs[i] - vecs[j]))
    return MagnitudeObservation(dim=field.dim, vertex_norms=norms, edge_norms=edge_norms)


def _complete_basis(columns: list, d: int) -> np.ndarray:
    """Extend orthonormal columns to a full orthonormal basis of R^d."""
    cols = [np.asarray(c, float) for c in columns]
    for k in range(d):
        if len(cols) == d:
            break
        w = np.zeros(d)
        w[k] = 1.0
        for _ in range(2):  # re-orthogonalize for stability
            for c in cols:
                w = w - (c @ w) * c
        nw = np.linalg.norm(w)
        if nw > 1e-6:
            cols.append(w / nw)
    if len(cols) != d:
        raise RuntimeError("orthonormal completion failed")
    return np.column_stack(cols)


def orbit_equivalent(f: VectorField, g: VectorField, tol: float | None = None):
    """Orthogonal U with g_i ~= U f_i for all i, or None if no such U exists.

    Two fields lie in one orbit exactly when their full Gram matrices agree.
    The matrix is rebuilt from a pivoted Gram-Schmidt basis of f whose
    coefficients are replayed on g, completed on the orthogonal complement,
    and verified against g before being returned.
    """
    if f.vectors.shape != g.vectors.shape:
        raise ValueError("fields must share vertex count and dimension")
    A, B = f.vectors, g.vectors
    n, d = A.shape
    scale = max(f.max_norm(), g.max_norm())
    if tol is None:
        tol = default_tolerance(scale)
    if n == 0 or d == 0:
        return np.eye(d)
    if np.max(np.abs(A @ A.T - B @ B.T)) > tol:
        return None

    # directions shorter than the cancellation noise floor are not real rank
    rank_tol = max(tol, np.sqrt(np.finfo(float).eps) * (1.0 + scale))
    # pivoted Gram-Schmidt on f; coefficient rows let us replay it on g
    basis_f: list[np.ndarray] = []
    basis_g: list[np.ndarray] = []
    coeff_rows: list[np.ndarray] = []   # row m: e_m = sum_l row[l] * A[pivots[l]]
    pivots: list[int] = []
    for _ in range(d):
        residual = np.sum(A * A, axis=1)
        for e in basis_f:
            residual = residual - (A @ e) ** 2
        p = int(np.argmax(residual))
        if residual[p] <= rank_tol * rank_tol:
            break
        w = A[p].copy()
        w_coeff = np.zeros(len(pivots) + 1)
        w_coeff[-1] = 1.0
        for _pass in range(2):  # second pass tightens cancellation error
            for m, e in enumerate(basis_f):
                proj = e @ w
                w = w - proj * e
                w_coeff[:-1] -= proj * coeff_rows[m]
        nw = np.linalg.norm(w)
        if nw <= rank_tol:
            break
        pivots.append(p)
        coeff_rows = [np.pad(r, (0, len(pivots) - len(r))) for r in coeff_rows]
        coeff_rows.append(w_coeff / nw)
        basis_f.append(w / nw)
        eg = np.zeros(d)
        for l, piv in enumerate(pivots):
            eg = eg + coeff_rows[-1][l] * B[piv]
        if abs(np.linalg.norm(eg) - 1.0) > 0.1:
            return None
        basis_g.append(eg)

    Ef = _complete_basis(basis_f, d)
    Eg = _complete_basis(basis_g, d)
    W, _, Vt = np.linalg.svd(Eg @ Ef.T)
    U = W @ Vt
    if np.max(np.linalg.norm(B - A @ U.T, axis=1)) > 10.0 * tol:
        return None
    return U
