"""Conjugate-equivalence certificates for real range spaces of complex vectors.

For a real m x n matrix A of full column rank, the measurements |<a_i, x>|
determine x = x_f up to a unimodular factor and complex conjugation exactly
when no "witness" exists.  At the space level the witness is a real matrix X
with

    rank(X) <= 2,   X^T != -X,   a_i^T X a_i = 0 for every row a_i,

and at the vector level a decomposition x_f = x_1 + x_2 whose mixing matrix
X = Re(x_2) Re(x_1)^T + Im(x_2) Im(x_1)^T satisfies the same trace
conditions with nonzero symmetric part.

The trace conditions see only S = (X + X^T)/2, and S is the symmetric part
of some rank-<=2 matrix exactly when S has at most two positive and at most
two negative eigenvalues; both directions are constructive (see
``rank_two_witness``).  That reduces the space-level search to hunting for
such an S inside the nullspace of the quadratic constraint map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

__all__ = [
    "RealMeasurementMatrix",
    "Verdict",
    "quadratic_nullspace",
    "rank_two_witness",
    "certify_range_space",
    "certify_vector",
    "complement_property",
]

# relative rank threshold for the constraint-map SVD
NULLSPACE_REL_TOL = 1e-10
# relative threshold for counting signs of eigenvalues
SIGNATURE_REL_TOL = 1e-9
# subsets of rows are enumerated exhaustively up to this many rows
COMPLEMENT_MAX_ROWS = 24

STATUS_YES = "ConjugatePR"
STATUS_NO = "NotConjugatePR"
STATUS_UNKNOWN = "Inconclusive"


@dataclass(frozen=True, eq=False)
class RealMeasurementMatrix:
    """Real m x n measurement matrix with full column rank."""

    matrix: np.ndarray

    def __post_init__(self):
        A = np.array(self.matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("measurement matrix must be 2-D and nonempty")
        if not np.all(np.isfinite(A)):
            raise ValueError("measurement matrix must be finite")
        rank = int(np.linalg.matrix_rank(A))
        if rank < A.shape[1]:
            raise ValueError(
                f"measurement matrix must have full column rank: rank {rank} < {A.shape[1]}"
            )
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of a conjugate-equivalence certificate.

    ``status`` is "ConjugatePR", "NotConjugatePR" or "Inconclusive".  For a
    negative space-level verdict ``witness_matrix`` holds the rank-<=2 X;
    a negative vector-level verdict additionally carries the decomposition
    ``witness_split = (x1, x2)`` with x_f = x1 + x2.
    """

    status: str
    witness_matrix: np.ndarray | None = None
    witness_split: tuple | None = None
    nullspace_dim: int = 0
    detail: str = ""


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, RealMeasurementMatrix):
        return A.matrix
    return RealMeasurementMatrix(A).matrix


def _sym_vec(S: np.ndarray) -> np.ndarray:
    """Upper triangle of S scaled so the Frobenius inner product is preserved."""
    n = S.shape[0]
    iu = np.triu_indices(n, k=1)
    return np.concatenate([np.diag(S), np.sqrt(2.0) * S[iu]])

def _sym_unvec(v: np.ndarray, n: int) -> np.ndarray:
    S = np.zeros((n, n))
    S[np.diag_indices(n)] = v[:n]
    iu = np.triu_indices(n, k=1)
    S[iu] = v[n:] / np.sqrt(2.0)
    return S + np.triu(S, k=1).T


def quadratic_nullspace(A, tol: float = NULLSPACE_REL_TOL) -> list:
    """Orthonormal basis of {S symmetric : a_i^T S a_i = 0 for all rows a_i}.

    Symmetric matrices are coordinatized isometrically, the constraints
    become rows sym_vec(a_i a_i^T), and the basis comes out of the SVD.
    """
    A = _as_matrix(A)
    m, n = A.shape
    rows = np.stack([_sym_vec(np.outer(A[i], A[i])) for i in range(m)])
    u, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return [_sym_unvec(vt[r], n) for r in range(rank, vt.shape[0])]


def _signature(S: np.ndarray, tol: float = SIGNATURE_REL_TOL):
    """(positive count, negative count) of eigenvalues, relative threshold."""
    eigvals = np.linalg.eigvalsh(S)
    scale = float(np.max(np.abs(eigvals))) if eigvals.size else 0.0
    threshold = tol * scale
    pos = int(np.sum(eigvals > threshold))
    neg = int(np.sum(eigvals < -threshold))
    return pos, neg


def _qualifies(S: np.ndarray, tol: float = SIGNATURE_REL_TOL) -> bool:
    """Nonzero symmetric part of some rank-<=2 matrix: <=2 positive and <=2
    negative eigenvalues."""
    pos, neg = _signature(S, tol)
    return (pos + neg) > 0 and pos <= 2 and neg <= 2


def rank_two_witness(S: np.ndarray) -> np.ndarray:
    """Rank-<=2 matrix X with (X + X^T)/2 = S.

    Pairs each positive eigendirection with a negative one: for lam > 0 > mu
    and orthonormal w, z, the rank-one X = uv^T with u = sqrt(lam) w +
    sqrt(-mu) z, v = sqrt(lam) w - sqrt(-mu) z has symmetric part
    lam w w^T + mu z z^T.  Unpaired positive (or negative) directions
    contribute their own symmetric rank-one piece.
    """
    eigvals, eigvecs = np.linalg.eigh(S)
    scale = float(np.max(np.abs(eigvals)))
    threshold = SIGNATURE_REL_TOL * scale
    pos = [i for i in np.argsort(eigvals)[::-1] if eigvals[i] > threshold]
    neg = [i for i in np.argsort(eigvals) if eigvals[i] < -threshold]
    if len(pos) > 2 or len(neg) > 2:
        raise ValueError("matrix has more than two eigenvalues of one sign")
    n = S.shape[0]
    X = np.zeros((n, n))
    for k in range(max(len(pos), len(neg))):
        if k < len(pos) and k < len(neg):
            w = eigvecs[:, pos[k]] * np.sqrt(eigvals[pos[k]])
            z = eigvecs[:, neg[k]] * np.sqrt(-eigvals[neg[k]])
            X += np.outer(w + z, w - z)
        elif k < len(pos):
            X += eigvals[pos[k]] * np.outer(eigvecs[:, pos[k]], eigvecs[:, pos[k]])
        else:
            X += eigvals[neg[k]] * np.outer(eigvecs[:, neg[k]], eigvecs[:, neg[k]])
    return X


def _verified_no(A: np.ndarray, S: np.ndarray, q: int, detail: str) -> Verdict | None:
    """Package a qualifying S as a NotConjugatePR verdict, re-verified."""
    X = rank_two_witness(S)
    scale = max(float(np.max(np.abs(S))), 1e-300)
    traces = np.array([A[i] @ X @ A[i] for i in range(A.shape[0])])
    svals = np.linalg.svd(X, compute_uv=False)
    ok = (
        np.max(np.abs(traces)) <= 1e-7 * scale * max(1.0, float(np.max(A * A)))
        and (svals.size < 3 or svals[2] <= 1e-8 * svals[0])
        and np.max(np.abs(X + X.T)) > 1e-12 * scale
    )
    if not ok:
        return None
    return Verdict(
        status=STATUS_NO,
        witness_matrix=X,
        nullspace_dim=q,
        detail=detail,
    )


def certify_range_space(
    A,
    tol: float = SIGNATURE_REL_TOL,
    search_budget: int = 100_000,
    seed: int = 0,
) -> Verdict:
    """Decide conjugate retrievability of the range space of A.

    Exact for n <= 3 and whenever the nullspace has dimension <= 1; for
    n >= 4 with a larger nullspace, a seeded randomized search over the
    nullspace runs within ``search_budget`` samples and an empty-handed
    search yields Inconclusive (never a false ConjugatePR).
    """
    A = _as_matrix(A)
    n = A.shape[1]
    basis = quadratic_nullspace(A)
    q = len(basis)
    if q == 0:
        return Verdict(status=STATUS_YES, nullspace_dim=0, detail="no trace-orthogonal S")
    # dimension <= 1: qualification of the single generator decides exactly
    # (sign counts of c*S depend only on sign(c), and (<=2, <=2) is symmetric)
    if q == 1:
        if _qualifies(basis[0], tol):
            verdict = _verified_no(A, basis[0], q, "one-dimensional nullspace generator")
            if verdict is not None:
                return verdict
        return Verdict(
            status=STATUS_YES,
            nullspace_dim=q,
            detail="nullspace generator never qualifies under scaling",
        )
    if n <= 2:
        verdict = _verified_no(A, basis[0], q, "every nonzero S qualifies for n <= 2")
        if verdict is not None:
            return verdict
    if n == 3:
        # q >= 2 always yields a witness: either a basis element is
        # non-definite, or the pencil B2 - mu*B1 with B1 definite is a
        # singular PSD (rank <= 2) element of the nullspace
        for B in basis:
            if _qualifies(B, tol):
                verdict = _verified_no(A, B, q, "non-definite nullspace basis element")
                if verdict is not None:
                    return verdict
        B1 = basis[0] if np.linalg.eigvalsh(basis[0])[0] > 0 else -basis[0]
        B2 = basis[1]
        L = np.linalg.cholesky(B1)
        M = np.linalg.solve(L, np.linalg.solve(L, B2).T).T
        mu = float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])
        S = B2 - mu * B1
        verdict = _verified_no(A, S, q, "pencil of two nullspace elements")
        if verdict is not None:
            return verdict
    # n >= 4: deterministic screen of the basis, then seeded random sampling
    for B in basis:
        if _qualifies(B, tol):
            verdict = _verified_no(A, B, q, "nullspace basis element qualifies")
            if verdict is not None:
                return verdict
    rng = np.random.default_rng(seed)
    for _ in range(int(search_budget)):
        coeffs = rng.standard_normal(q)
        S = sum(c * B for c, B in zip(coeffs, basis))
        if _qualifies(S, tol):
            verdict = _verified_no(A, S, q, "randomized nullspace sample")
            if verdict is not None:
                return verdict
    return Verdict(
        status=STATUS_UNKNOWN,
        nullspace_dim=q,
        detail=f"no qualifying S found in {search_budget} samples",
    )


def certify_vector(
    A,
    x,
    tol: float = SIGNATURE_REL_TOL,
    search_budget: int = 100_000,
    seed: int = 0,
) -> Verdict:
    """Decide conjugate retrievability of the single vector x under A.

    A positive space-level certificate transfers to every vector.  Otherwise
    a seeded multistart least-squares search looks for a decomposition
    x = x1 + x2 whose mixing matrix is trace-orthogonal to all a_i a_i^T and
    has nonzero symmetric part; a found pair is returned as the witness,
    exhaustion yields Inconclusive.
    """
    A = _as_matrix(A)
    m, n = A.shape
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.shape[0] != n:
        raise ValueError("vector length must match matrix columns")
    space = certify_range_space(A, tol=tol, search_budget=search_budget, seed=seed)
    if space.status == STATUS_YES:
        return Verdict(
            status=STATUS_YES,
            nullspace_dim=space.nullspace_dim,
            detail="inherited from the range-space certificate",
        )
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        return Verdict(
            status=STATUS_YES,
            nullspace_dim=space.nullspace_dim,
            detail="zero vector is trivially retrievable",
        )
    c, e = x.real.copy(), x.imag.copy()
    gamma, delta = A @ c, A @ e

    def residuals(z):
        p, qv = z[:n], z[n:]
        alpha, beta = A @ p, A @ qv
        return alpha * (gamma - alpha) + beta * (delta - beta)

    def jacobian(z):
        p, qv = z[:n], z[n:]
        alpha, beta = A @ p, A @ qv
        return np.hstack([(gamma - 2 * alpha)[:, None] * A, (delta - 2 * beta)[:, None] * A])

    rng = np.random.default_rng(seed)
    restarts = max(8, int(search_budget) // 2000)
    res_tol = 1e-10 * scale * scale * max(1.0, float(np.max(A * A)))
    for _ in range(restarts):
        z0 = rng.standard_normal(2 * n) * scale
        sol = scipy.optimize.least_squares(
            residuals, z0, jac=jacobian, method="trf",
            ftol=1e-15, xtol=1e-15, gtol=1e-15, max_nfev=400,
        )
        if np.max(np.abs(residuals(sol.x))) > res_tol:
            continue
        p, qv = sol.x[:n], sol.x[n:]
        X = np.outer(c - p, p) + np.outer(e - qv, qv)
        S = 0.5 * (X + X.T)
        if np.linalg.norm(S) <= 1e-6 * scale * scale:
            continue  # symmetric part collapsed; trivial decomposition
        x1 = p + 1j * qv
        x2 = x - x1
        return Verdict(
            status=STATUS_NO,
            witness_matrix=X,
            witness_split=(x1, x2),
            nullspace_dim=space.nullspace_dim,
            detail="decomposition found by multistart least squares",
        )
    return Verdict(
        status=STATUS_UNKNOWN,
        nullspace_dim=space.nullspace_dim,
        detail=f"no decomposition found in {restarts} restarts",
    )


def _spanning_table(A: np.ndarray, tol: float) -> np.ndarray:
    """spans[mask] == True iff the rows selected by mask span R^n."""
    m, n = A.shape
    total = 1 << m
    spans = np.zeros(total, dtype=bool)
    if m < n:
        return spans
    sigma = float(np.linalg.svd(A, compute_uv=False)[0])
    if sigma == 0.0:
        return spans
    chunk = 1 << 14
    bits = np.arange(m)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        select = ((masks[:, None] >> bits) & 1).astype(float)
        batch = select[:, :, None] * A[None, :, :]
        svals = np.linalg.svd(batch, compute_uv=False)
        spans[start : start + masks.size] = svals[:, n - 1] > tol * sigma
    return spans


def complement_property(A, tol: float = NULLSPACE_REL_TOL) -> bool:
    """Exhaustively test: every split of the rows leaves one side spanning R^n.

    Enumerates all 2^m subsets (m <= 24); each unordered pair {T, complement}
    is checked once.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError("matrix must be 2-D and nonempty")
    m, n = A.shape
    if m > COMPLEMENT_MAX_ROWS:
        raise ValueError(f"exhaustive enumeration limited to {COMPLEMENT_MAX_ROWS} rows")
    spans = _spanning_table(A, tol)
    full = (1 << m) - 1
    for mask in range(0, 1 << m, 2):   # even masks: row 0 always in the complement
        if not (spans[mask] or spans[full ^ mask]):
            return False
    return True
