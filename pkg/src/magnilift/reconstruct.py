"""Reconstruction of a vector field from magnitude observations.

Two routes:

- ``reconstruct_complete``: on a complete graph the polarized Gram matrix is
  fully known, so the field is a rank-d PSD factorization away.
- ``reconstruct_propagate``: on a sparse graph, embed one nondegenerate
  simplex and walk the simplex graph, solving one new vertex per step from
  its inner products with an already placed simplex face.

Both return the field in some orthogonal frame; callers compare frames with
:func:`magnilift.graphs.orbit_equivalent`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .gram import polarize
from .graphs import MagnitudeObservation, SimpleGraph, VectorField, observe
from .simplex import SimplexGraph, build_simplex_graph, check_uniqueness_hypotheses

__all__ = [
    "ReconstructionError",
    "GramNotPositive",
    "RankExceedsDimension",
    "IllConditionedSolve",
    "InconsistentObservation",
    "PreconditionViolated",
    "DegenerateSimplex",
    "ReconstructionResult",
    "embed_from_gram",
    "align_simplex",
    "observation_residual",
    "reconstruct_complete",
    "reconstruct_propagate",
]

# eigenvalues of a Gram matrix below EIG_REL_TOL * max|eig| count as zero
EIG_REL_TOL = 1e-9
# default ceiling on the relative data-consistency residual
RESIDUAL_TOL = 1e-6
# propagation solves are rejected beyond this condition number
CONDITION_CAP = 1e12


class ReconstructionError(Exception):
    """Base class for reconstruction failures."""


class GramNotPositive(ReconstructionError):
    """Polarized Gram matrix has a significantly negative eigenvalue."""


class RankExceedsDimension(ReconstructionError):
    """Gram matrix needs more dimensions than the target d."""


class IllConditionedSolve(ReconstructionError):
    """A propagation step hit a nearly singular face system."""


class InconsistentObservation(ReconstructionError):
    """Reconstructed field fails to reproduce the observation."""

    def __init__(self, residual: float):
        super().__init__(f"observation residual {residual:.3e} exceeds tolerance")
        self.residual = residual


class PreconditionViolated(ReconstructionError):
    """Inputs to an alignment do not share norms and distances."""


class DegenerateSimplex(ReconstructionError):
    """Simplex vertices are affinely dependent."""


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Outcome of a reconstruction.

    ``status`` is "ok" or "no_simplex"; in the latter case ``field`` and
    ``residual`` are None and nothing was reconstructed.  ``unreached``
    lists vertices in no nondegenerate simplex; their rows in ``field``
    are zero and carry no information.
    """

    field: VectorField | None
    certified_unique: bool
    residual: float | None
    method: str  # "complete_gram" | "simplex_propagation"
    status: str = "ok"
    unreached: tuple[int, ...] = ()


def embed_from_gram(gram_matrix, dim: int, tol: float = EIG_REL_TOL) -> np.ndarray:
    """Vectors (rows) realizing a PSD matrix as their Gram matrix in R^dim.

    Eigenvalues within tol * max|eig| of zero are clamped to zero; a more
    negative eigenvalue raises GramNotPositive, more than ``dim`` positive
    eigenvalues raise RankExceedsDimension.
    """
    G = np.asarray(gram_matrix, float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("gram matrix must be square")
    if dim < 0:
        raise ValueError("dim must be nonnegative")
    m = G.shape[0]
    if m == 0:
        return np.zeros((0, dim))
    eigvals, eigvecs = np.linalg.eigh(0.5 * (G + G.T))
    scale = float(np.max(np.abs(eigvals))) if m else 0.0
    threshold = tol * scale
    if eigvals[0] < -threshold:
        raise GramNotPositive(
            f"most negative eigenvalue {eigvals[0]:.3e} below -{threshold:.3e}"
        )
    positive = eigvals > threshold
    rank = int(np.count_nonzero(positive))
    if rank > dim:
        raise RankExceedsDimension(f"Gram rank {rank} exceeds target dimension {dim}")
    order = np.argsort(eigvals)[::-1][:rank]
    X = np.zeros((m, dim))
    for col, idx in enumerate(order):
        X[:, col] = eigvecs[:, idx] * np.sqrt(max(eigvals[idx], 0.0))
    return X


def _max_relative_gap(predicted: float, observed: float) -> float:
    return abs(predicted - observed) / (1.0 + abs(observed))


def align_simplex(source, target, tol: float | None = None) -> np.ndarray:
    """Orthogonal U mapping source simplex vertices onto target vertices.

    Both inputs are (d+1, d) arrays with matching norms and pairwise
    distances (checked; PreconditionViolated otherwise).  The source must be
    affinely independent (DegenerateSimplex otherwise).  Centering on vertex
    0 reduces the problem to a d x d linear solve; the result is projected
    back to the orthogonal group and verified.
    """
    X = np.asarray(source, float)
    Y = np.asarray(target, float)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1] + 1:
        raise ValueError("expected two (d+1, d) arrays of simplex vertices")
    d = X.shape[1]
    scale = max(1.0, float(np.max(np.abs(X))), float(np.max(np.abs(Y))))
    if tol is None:
        tol = 1e-8 * scale
    norm_gap = np.abs(np.linalg.norm(X, axis=1) - np.linalg.norm(Y, axis=1))
    if np.max(norm_gap) > tol:
        raise PreconditionViolated("vertex norms differ between source and target")
    DX = X[1:] - X[0]
    DY = Y[1:] - Y[0]
    gram_gap = np.max(np.abs(DX @ DX.T - DY @ DY.T))
    if gram_gap > tol * scale:
        raise PreconditionViolated("pairwise geometry differs between source and target")
    svals = np.linalg.svd(DX, compute_uv=False)
    if svals[-1] <= 1e-12 * max(svals[0], 1.0):
        raise DegenerateSimplex("source simplex is affinely dependent")
    M = np.linalg.solve(DX, DY).T
    # M carries the edge span onto the target; snap to the orthogonal group
    W, _, Vt = np.linalg.svd(M)
    U = W @ Vt
    if np.max(np.linalg.norm(Y - X @ U.T, axis=1)) > 10.0 * tol:
        raise PreconditionViolated("alignment residual exceeds tolerance")
    return U


def observation_residual(
    obs: MagnitudeObservation,
    graph: SimpleGraph,
    field: VectorField,
    vertices=None,
    edges=None,
) -> float:
    """max over observed quantities of |predicted - observed| / (1 + observed).

    ``vertices``/``edges`` restrict which observations are compared (used for
    partial reconstructions); None compares everything.
    """
    vecs = field.vectors
    use_vertices = range(graph.vertex_count) if vertices is None else vertices
    use_edges = graph.edges if edges is None else edges
    worst = 0.0
    for v in use_vertices:
        worst = max(
            worst,
            _max_relative_gap(float(np.linalg.norm(vecs[v])), float(obs.vertex_norms[v])),
        )
    for i, j in use_edges:
        observed = obs.edge_norms[(i, j) if i < j else (j, i)]
        worst = max(
            worst,
            _max_relative_gap(float(np.linalg.norm(vecs[i] - vecs[j])), observed),
        )
    return worst


def _polish_positions(positions, obs, vertices, edges, iterations=15):
    """Newton steps on the squared vertex and edge norm equations.

    Propagation chains one frame solve per simplex, so its error grows
    with the chain length and the worst face condition number.  The
    equations are quadratic, hence each Newton step roughly squares the
    error; a handful of steps from the propagated start restores rounding
    level accuracy.  Inconsistent data just settles on a least-squares
    fit, which the caller's residual check still rejects.
    """
    order = list(vertices)
    index = {v: k for k, v in enumerate(order)}
    X = positions[order].astype(float)
    m, d = X.shape
    vt = np.array([float(obs.vertex_norms[v]) ** 2 for v in order])
    et = np.array(
        [float(obs.edge_norms[(i, j) if i < j else (j, i)]) ** 2 for i, j in edges]
    )
    ei = np.array([index[i] for i, j in edges], dtype=int)
    ej = np.array([index[j] for i, j in edges], dtype=int)
    scale = 1.0 + max(vt.max(initial=0.0), et.max(initial=0.0))
    best = np.inf
    for _ in range(iterations):
        rv = np.einsum("ij,ij->i", X, X) - vt
        diff = X[ei] - X[ej] if ei.size else np.zeros((0, d))
        re = np.einsum("ij,ij->i", diff, diff) - et
        r = np.concatenate([rv, re])
        gap = float(np.max(np.abs(r), initial=0.0))
        if gap <= 64.0 * np.finfo(float).eps * scale or gap >= 0.5 * best:
            break
        best = gap
        J = np.zeros((r.size, m * d))
        rows = np.arange(m)
        for k in range(d):
            J[rows, rows * d + k] = 2.0 * X[:, k]
        for row in range(ei.size):
            a, b = ei[row], ej[row]
            J[m + row, a * d : a * d + d] = 2.0 * diff[row]
            J[m + row, b * d : b * d + d] -= 2.0 * diff[row]
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        X = X + step.reshape(m, d)
    out = positions.copy()
    out[order] = X
    return out


def reconstruct_complete(
    obs: MagnitudeObservation,
    graph: SimpleGraph,
    dim: int,
    tol: float = EIG_REL_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> ReconstructionResult:
    """Reconstruct from a complete graph by factoring the full Gram matrix."""
    if not graph.is_complete:
        raise ValueError("reconstruct_complete requires a complete graph")
    if obs.vertex_count != graph.vertex_count:
        raise ValueError("observation and graph disagree on vertex count")
    gram = polarize(obs)
    G = gram.block(range(graph.vertex_count))
    X = embed_from_gram(G, dim, tol)
    field = VectorField(X)
    residual = observation_residual(obs, graph, field)
    if residual > residual_tol:
        raise InconsistentObservation(residual)
    return ReconstructionResult(
        field=field,
        certified_unique=True,
        residual=residual,
        method="complete_gram",
    )


def reconstruct_propagate(
    obs: MagnitudeObservation,
    graph: SimpleGraph,
    dim: int,
    tol: float = EIG_REL_TOL,
    residual_tol: float = RESIDUAL_TOL,
    simplex_graph: SimplexGraph | None = None,
) -> ReconstructionResult:
    """Reconstruct by breadth-first propagation over the simplex graph.

    Each simplex-graph component is embedded in its own orthogonal frame,
    starting from its lexicographically smallest simplex.  The result is
    certified unique only when the simplex graph is connected and covers
    every vertex.  With no nondegenerate simplex at all, returns a
    ``status="no_simplex"`` result instead of a field.
    """
    if obs.vertex_count != graph.vertex_count:
        raise ValueError("observation and graph disagree on vertex count")
    n = graph.vertex_count
    sg = simplex_graph if simplex_graph is not None else build_simplex_graph(graph, obs, dim)
    report = check_uniqueness_hypotheses(sg, graph)
    if not sg.simplices:
        return ReconstructionResult(
            field=None,
            certified_unique=False,
            residual=None,
            method="simplex_propagation",
            status="no_simplex",
            unreached=tuple(range(n)),
        )
    gram = polarize(obs)
    adjacency: list[list[int]] = [[] for _ in sg.simplices]
    for a, b in sg.edges:
        adjacency[a].append(b)
        adjacency[b].append(a)

    positions = np.zeros((n, dim))
    component_of: dict[int, int] = {}   # vertex -> component id
    visited = [False] * len(sg.simplices)
    component_id = 0
    for root in range(len(sg.simplices)):
        if visited[root]:
            continue
        # fresh frame for this component, rooted at its smallest simplex
        local: dict[int, np.ndarray] = {}
        root_vertices = sg.simplices[root]
        X = embed_from_gram(gram.block(root_vertices), dim, tol)
        for row, v in enumerate(root_vertices):
            local[v] = X[row]
        visited[root] = True
        queue = deque([root])
        while queue:
            current = queue.popleft()
            for neighbor in adjacency[current]:
                if visited[neighbor]:
                    continue
                visited[neighbor] = True
                queue.append(neighbor)
                new_vertices = [v for v in sg.simplices[neighbor] if v not in local]
                if not new_vertices:
                    continue
                # the certified face is the one shared with the simplex we came from
                shared = [v for v in sg.simplices[neighbor] if v in sg.simplices[current]]
                for v in new_vertices:
                    B = np.stack([local[s] for s in shared[:dim]])
                    rhs = np.array([gram.get(v, s) for s in shared[:dim]])
                    svals = np.linalg.svd(B, compute_uv=False)
                    if svals[-1] <= 0 or svals[0] / svals[-1] > CONDITION_CAP:
                        raise IllConditionedSolve(
                            f"face system for vertex {v} has condition "
                            f"{'inf' if svals[-1] <= 0 else svals[0] / svals[-1]:.3e}"
                        )
                    local[v] = np.linalg.solve(B, rhs)
        for v, x in local.items():
            if v not in component_of:
                component_of[v] = component_id
                positions[v] = x
        component_id += 1

    covered = sorted(component_of)
    unreached = tuple(v for v in range(n) if v not in component_of)
    same_component_edges = [
        (i, j)
        for i, j in graph.edges
        if i in component_of and j in component_of and component_of[i] == component_of[j]
    ]
    if covered:
        positions = _polish_positions(positions, obs, covered, same_component_edges)
    field = VectorField(positions)
    residual = observation_residual(obs, graph, field, vertices=covered, edges=same_component_edges)
    if residual > residual_tol:
        raise InconsistentObservation(residual)
    return ReconstructionResult(
        field=field,
        certified_unique=report.certified,
        residual=residual,
        method="simplex_propagation",
        unreached=unreached,
    )
