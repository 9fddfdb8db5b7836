"""Inner products recovered from magnitude data, and Gram-based rank tests.

The polarization identity

    <f_i, f_j> = (||f_i||^2 + ||f_j||^2 - ||f_i - f_j||^2) / 2

turns an observation into a partially known Gram matrix: diagonal entries are
always known, off-diagonal entries only along observed edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import MagnitudeObservation

__all__ = [
    "MissingEntryError",
    "PartialGram",
    "polarize",
    "affinely_independent",
    "linearly_independent",
]

# relative positive-definiteness threshold, scaled by the largest diagonal entry
PD_REL_TOL = 1e-10


class MissingEntryError(KeyError):
    """Requested a Gram entry that the observation never determined."""


@dataclass(frozen=True, eq=False)
class PartialGram:
    """Symmetric matrix known only on the diagonal and a set of pairs.

    ``entries`` maps (i, j) with i <= j to <f_i, f_j>.
    """

    size: int
    entries: dict

    def __post_init__(self):
        cleaned = {}
        for key, value in self.entries.items():
            i, j = int(key[0]), int(key[1])
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise ValueError(f"entry key {key!r} out of range")
            cleaned[(i, j) if i <= j else (j, i)] = float(value)
        object.__setattr__(self, "entries", cleaned)

    def has(self, i: int, j: int) -> bool:
        return ((i, j) if i <= j else (j, i)) in self.entries

    def get(self, i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        try:
            return self.entries[key]
        except KeyError:
            raise MissingEntryError(f"Gram entry {key} is not determined by the observation")

    def block(self, indices) -> np.ndarray:
        """Dense Gram block over the given vertices; raises MissingEntryError."""
        idx = [int(v) for v in indices]
        k = len(idx)
        out = np.empty((k, k))
        for a in range(k):
            for b in range(a, k):
                out[a, b] = out[b, a] = self.get(idx[a], idx[b])
        return out


def polarize(obs: MagnitudeObservation) -> PartialGram:
    """Partial Gram matrix of the observed field via the polarization identity."""
    n = obs.vertex_count
    sq = np.asarray(obs.vertex_norms, float) ** 2
    entries = {(i, i): float(sq[i]) for i in range(n)}
    for (i, j), dist in obs.edge_norms.items():
        entries[(i, j)] = 0.5 * (float(sq[i]) + float(sq[j]) - float(dist) ** 2)
    return PartialGram(n, entries)


def affinely_independent(gram_block, tol: float = PD_REL_TOL) -> bool:
    """Whether vectors with this Gram block are affinely independent.

    Restricts the quadratic form to the zero-sum hyperplane (basis columns
    e_i - e_k) and asks for strict positive definiteness there, with a
    threshold relative to the largest diagonal entry.
    """
    G = np.asarray(gram_block, float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("gram_block must be square")
    k = G.shape[0]
    if k == 0:
        raise ValueError("gram_block must be nonempty")
    if k == 1:
        return True
    basis = np.eye(k)[:, : k - 1]
    basis[k - 1, :] = -1.0
    M = basis.T @ G @ basis
    threshold = tol * max(float(np.max(np.diag(G))), 0.0)
    return bool(np.linalg.eigvalsh(M)[0] > threshold)


def linearly_independent(gram_block, tol: float = PD_REL_TOL) -> bool:
    """Whether vectors with this Gram block are linearly independent."""
    G = np.asarray(gram_block, float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("gram_block must be square")
    if G.shape[0] == 0:
        raise ValueError("gram_block must be nonempty")
    threshold = tol * max(float(np.max(np.diag(G))), 0.0)
    return bool(np.linalg.eigvalsh(G)[0] > threshold)
