"""Injectivity analysis for norm measurements with reference shifts.

A system measures an unknown coefficient vector f in R^p through
|| Phi f + b || for a family of matrices Phi (one per measurement site)
and per-site reference vectors b.  Uniqueness of f from all these norms is
governed by linear maps built from the system:

  * the shifted map at u, with rows (Phi u + b)^T Phi: the system
    identifies every f exactly when this map is injective for all u;
  * the difference map, with rows (b_i - b_j)^T Phi over reference pairs:
    its injectivity is a sufficient certificate (two or more references);
  * the plain measurement stack of all Phi rows: its injectivity is always
    necessary, and also sufficient when the reference differences span the
    measurement space at every site.

Equal norms for f and g force <Phi(f-g), Phi(f+g) + 2b> = 0, so a shifted
map with a null vector v at some u yields the exact counterexample pair
f = u + v/2, g = u - v/2.  The universal quantifier over u has no finite
certificate here, so a budget-bounded falsifier searches for such a u, and
its failure is reported as INCONCLUSIVE, never as a YES.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Measurement",
    "AffineSystem",
    "AffineReport",
    "measurement_stack",
    "difference_map",
    "difference_map_injective",
    "shifted_map",
    "shifted_map_injective",
    "affine_measurements",
    "check_affine_pr",
]

# relative singular-value threshold for all rank decisions
RANK_REL_TOL = 1e-10
# a counterexample pair must match norms this tightly, scaled
PAIR_GAP_TOL = 1e-10

VERDICT_YES = "CERTIFIED_YES"
VERDICT_NO = "CERTIFIED_NO"
VERDICT_UNKNOWN = "INCONCLUSIVE"


@dataclass(frozen=True, eq=False)
class Measurement:
    """One site: a d x p matrix and its N reference vectors in R^d."""

    matrix: np.ndarray
    references: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.size == 0:
            raise ValueError("measurement matrix must be 2-D and nonempty")
        R = np.array(self.references, dtype=float)
        if R.ndim != 2 or R.shape[0] < 1 or R.shape[1] != M.shape[0]:
            raise ValueError("references must be N x d with N >= 1")
        if not (np.all(np.isfinite(M)) and np.all(np.isfinite(R))):
            raise ValueError("measurement data must be finite")
        M.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "references", R)


@dataclass(frozen=True, eq=False)
class AffineSystem:
    """All measurement sites; shared coefficient dimension p, space
    dimension d, and reference count N."""

    measurements: tuple

    def __post_init__(self):
        ms = tuple(self.measurements)
        if not ms:
            raise ValueError("system needs at least one measurement")
        if not all(isinstance(m, Measurement) for m in ms):
            raise ValueError("measurements must be Measurement instances")
        d, p = ms[0].matrix.shape
        n_refs = ms[0].references.shape[0]
        for m in ms[1:]:
            if m.matrix.shape != (d, p):
                raise ValueError("all measurement matrices must share d x p")
            if m.references.shape[0] != n_refs:
                raise ValueError("all sites must carry the same number of references")
        object.__setattr__(self, "measurements", ms)

    @property
    def coeff_dim(self) -> int:
        return self.measurements[0].matrix.shape[1]

    @property
    def space_dim(self) -> int:
        return self.measurements[0].matrix.shape[0]

    @property
    def reference_count(self) -> int:
        return self.measurements[0].references.shape[0]


@dataclass(frozen=True, eq=False)
class AffineReport:
    verdict: str
    certificate: str = ""
    counterexample: tuple | None = None
    detail: str = ""


def _full_column_rank(M: np.ndarray, p: int, tol: float) -> bool:
    if M.shape[0] < p:
        return False
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[p - 1] > tol * s[0]) if s[0] > 0 else False


def measurement_stack(sys: AffineSystem) -> np.ndarray:
    """All Phi rows stacked: the reference-free linear measurement map."""
    return np.vstack([m.matrix for m in sys.measurements])


def difference_map(sys: AffineSystem) -> np.ndarray:
    """Rows (b_i - b_j)^T Phi over all sites and reference pairs i < j."""
    if sys.reference_count < 2:
        raise ValueError("difference map needs at least two references per site")
    rows = []
    for m in sys.measurements:
        R = m.references
        for i in range(R.shape[0]):
            for j in range(i + 1, R.shape[0]):
                rows.append((R[i] - R[j]) @ m.matrix)
    return np.vstack(rows)


def difference_map_injective(sys: AffineSystem, tol: float = RANK_REL_TOL) -> bool:
    return _full_column_rank(difference_map(sys), sys.coeff_dim, tol)


def shifted_map(sys: AffineSystem, u) -> np.ndarray:
    """Rows (Phi u + b_i)^T Phi over all sites and references."""
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape[0] != sys.coeff_dim:
        raise ValueError("shift vector length must equal the coefficient dimension")
    rows = []
    for m in sys.measurements:
        shifted = m.matrix @ u + m.references  # N x d
        rows.append(shifted @ m.matrix)
    return np.vstack(rows)


def shifted_map_injective(sys: AffineSystem, u, tol: float = RANK_REL_TOL) -> bool:
    return _full_column_rank(shifted_map(sys, u), sys.coeff_dim, tol)


def affine_measurements(sys: AffineSystem, f) -> np.ndarray:
    """||Phi f + b_i|| flat over sites in order, references within a site."""
    f = np.asarray(f, dtype=float).reshape(-1)
    if f.shape[0] != sys.coeff_dim:
        raise ValueError("vector length must equal the coefficient dimension")
    out = []
    for m in sys.measurements:
        out.append(np.linalg.norm(m.matrix @ f + m.references, axis=1))
    return np.concatenate(out)


def _reference_scale(sys: AffineSystem) -> float:
    return max(
        float(max(np.max(np.abs(m.references)), np.max(np.abs(m.matrix))))
        for m in sys.measurements
    )


def _verified_pair(sys: AffineSystem, u: np.ndarray, v: np.ndarray, certificate: str, detail: str):
    """Package f = u + v/2, g = u - v/2 if their norms genuinely agree."""
    f = u + 0.5 * v
    g = u - 0.5 * v
    mf = affine_measurements(sys, f)
    mg = affine_measurements(sys, g)
    scale = 1.0 + float(np.max(mf))
    sep = 1e-8 * (1.0 + np.linalg.norm(f) + np.linalg.norm(g))
    if np.max(np.abs(mf - mg)) <= PAIR_GAP_TOL * scale and np.linalg.norm(f - g) > sep:
        return AffineReport(
            verdict=VERDICT_NO,
            certificate=certificate,
            counterexample=(f, g),
            detail=detail,
        )
    return None


def _null_vector(M: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest right singular vector and its relative singular value."""
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    p = vt.shape[1]
    if M.shape[0] < p:
        # rows cannot constrain all of R^p; vt[-1] is an exact kernel direction
        return vt[-1], 0.0
    rel = float(s[p - 1] / s[0]) if s[0] > 0 else 0.0
    return vt[p - 1], rel


def check_affine_pr(
    sys: AffineSystem,
    tol: float = RANK_REL_TOL,
    falsify_budget: int = 200,
    seed: int = 0,
) -> AffineReport:
    """Certified uniqueness analysis of the system.

    YES routes are the sufficient conditions: an injective difference map
    (two or more references), spanning reference differences combined with
    an injective measurement stack, and the scalar-space criterion that
    sites with distinct references already pin the coefficients.  NO routes
    return a verified pair (f, g) of distinct vectors with identical
    measurements: from a kernel vector of the measurement stack, from a
    kernel vector of the difference map when some reference group is
    realizable as Phi f0, or from a falsifier that hunts for a shift u
    making the shifted map singular.  A fruitless search is INCONCLUSIVE.
    """
    p = sys.coeff_dim
    n_refs = sys.reference_count
    stack = measurement_stack(sys)

    # the measurement stack must be injective no matter the references:
    # a kernel vector shifts f without moving any Phi f
    if not _full_column_rank(stack, p, tol):
        v, _ = _null_vector(stack)
        report = _verified_pair(
            sys,
            np.zeros(p),
            v,
            certificate="stacked_measurements_singular",
            detail="kernel vector of the measurement stack is invisible to every site",
        )
        if report is not None:
            return report

    if n_refs >= 2:
        diff = difference_map(sys)
        h0, diff_rel = _null_vector(diff)
        if _full_column_rank(diff, p, tol):
            return AffineReport(
                verdict=VERDICT_YES,
                certificate="difference_map_injective",
                detail="reference-difference rows have full column rank",
            )
        # spanning reference differences make the difference map as strong
        # as the measurement stack; the stack was injective above
        if all(
            _spans_space(m.references, tol) for m in sys.measurements
        ) and _full_column_rank(stack, p, tol):
            return AffineReport(
                verdict=VERDICT_YES,
                certificate="spanning_references",
                detail="reference differences span every site; measurement stack injective",
            )
        if sys.space_dim == 1:
            active = [
                m.matrix
                for m in sys.measurements
                if np.max(m.references) - np.min(m.references)
                > tol * (1.0 + float(np.max(np.abs(m.references))))
            ]
            if active and _full_column_rank(np.vstack(active), p, tol):
                return AffineReport(
                    verdict=VERDICT_YES,
                    certificate="scalar_active_rank",
                    detail="sites with distinct scalar references pin the coefficients",
                )
        # difference map singular: if some reference group is realizable
        # as Phi f0, the kernel vector converts into a counterexample
        if diff_rel <= tol:
            for i0 in range(n_refs):
                b_stack = np.concatenate([m.references[i0] for m in sys.measurements])
                f0, *_ = np.linalg.lstsq(stack, b_stack, rcond=None)
                residual = np.linalg.norm(stack @ f0 - b_stack)
                if residual <= tol * (1.0 + np.linalg.norm(b_stack)):
                    report = _verified_pair(
                        sys,
                        -f0,
                        h0,
                        certificate="difference_map_singular",
                        detail="difference-map kernel vector against a realizable reference group",
                    )
                    if report is not None:
                        return report
                    break

    report = _falsify(sys, tol, falsify_budget, seed)
    if report is not None:
        return report
    return AffineReport(
        verdict=VERDICT_UNKNOWN,
        certificate="",
        detail=f"no singular shift found within {falsify_budget} restarts",
    )


def _spans_space(references: np.ndarray, tol: float) -> bool:
    diffs = references[1:] - references[0]
    if diffs.size == 0:
        return references.shape[1] == 0
    s = np.linalg.svd(diffs, compute_uv=False)
    d = references.shape[1]
    if diffs.shape[0] < d:
        return False
    return bool(s[d - 1] > tol * s[0]) if s[0] > 0 else False


def _falsify(sys: AffineSystem, tol: float, budget: int, seed: int):
    """Multi-start descent on the smallest singular value of the shifted map.

    The map's entries <Phi v, Phi u + b_i> are linear in u for fixed v and
    vice versa, so each restart alternates exact least-squares steps.  Any
    candidate must survive the verified-pair gate before a NO is returned.
    """
    p = sys.coeff_dim
    rows = sum(m.references.shape[0] for m in sys.measurements)
    if rows < p:
        # too few rows to be injective anywhere; u = 0 already works
        v, _ = _null_vector(shifted_map(sys, np.zeros(p)))
        report = _verified_pair(
            sys,
            np.zeros(p),
            v,
            certificate="shifted_map_singular",
            detail="fewer measurement rows than coefficients",
        )
        if report is not None:
            return report

    rng = np.random.default_rng(seed)
    scale = 1.0 + _reference_scale(sys)
    for restart in range(int(budget)):
        if restart == 0:
            u = np.zeros(p)
        else:
            u = rng.standard_normal(p) * scale * 10.0 ** int(rng.integers(0, 3))
        v, rel = _null_vector(shifted_map(sys, u))
        for it in range(30):
            # u-step: rows (Phi v)^T Phi, constants <Phi v, b_i>
            M_rows, c = [], []
            for m in sys.measurements:
                w = m.matrix @ v
                row = w @ m.matrix
                for i in range(m.references.shape[0]):
                    M_rows.append(row)
                    c.append(w @ m.references[i])
            u, *_ = np.linalg.lstsq(np.vstack(M_rows), -np.asarray(c), rcond=None)
            prev = rel
            v, rel = _null_vector(shifted_map(sys, u))
            if rel <= 1e-12 or (it >= 3 and rel > 0.9 * prev):
                break
        if rel <= 1e-9:
            report = _verified_pair(
                sys,
                u,
                v,
                certificate="shifted_map_singular",
                detail=f"falsifier found a singular shift after {restart + 1} restart(s)",
            )
            if report is not None:
                return report
    return None
