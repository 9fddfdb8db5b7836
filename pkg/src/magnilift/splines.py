"""Magnitude retrieval for piecewise-linear splines on the integer grid.

Functions here live in the span of integer shifts of the unit bump
b(t) = max(1 - |t|, 0), so f = sum_k c(k) b(. - k) interpolates its own
coefficients: f(k) = c(k), and f is linear between integers.  Magnitude-only
identification works up to a unimodular factor and complex conjugation
exactly when the coefficients have no interior zero and at most one
consecutive pair with a nonzero imaginary cross term Im(c(k) conj(c(k+1))).

Recovery consumes |f| on the half-integer grid.  Integer samples give the
coefficient moduli; each midpoint sample gives the real part of the cross
term through

    |f(k + 1/2)|^2 = (|c(k)|^2 + |c(k+1)|^2 + 2 Re(c(k) conj(c(k+1)))) / 4,

and the modulus of the imaginary part follows from
|c(k)|^2 |c(k+1)|^2 - Re(...)^2.  Only the signs of the imaginary parts stay
open; they are enumerated as branches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CoeffSequence",
    "MagnitudeSamples",
    "CriterionReport",
    "InconsistentSamples",
    "WindowMismatch",
    "AmbiguousSupport",
    "BranchLimitExceeded",
    "check_criterion",
    "conjugate_equivalent",
    "sample_magnitudes",
    "recover",
    "check_real_criterion",
]

# relative threshold deciding that an imaginary cross term is nonzero
CROSS_IM_REL_TOL = 1e-6
# relative clamp for the squared-imaginary-part discriminant
DISCRIMINANT_REL_TOL = 1e-9
# recovery refuses more than this many sign branches
MAX_BRANCH_POSITIONS = 12


class InconsistentSamples(ValueError):
    """Samples violate the interpolation identities beyond tolerance."""


class WindowMismatch(ValueError):
    """Sample grid is malformed or does not cover the support."""


class AmbiguousSupport(ValueError):
    """An interior zero splits the support; relative phases of the pieces
    are unobservable, so there is no finite list of classes."""


class BranchLimitExceeded(ValueError):
    """Too many sign-ambiguous positions to enumerate."""


@dataclass(frozen=True, eq=False)
class CoeffSequence:
    """Finitely supported complex coefficients c(offset), c(offset+1), ...

    Stored canonically: exact zeros are trimmed from both ends, so the first
    and last stored entries are nonzero.  An empty array is the zero
    function (offset normalized to 0).
    """

    offset: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        nonzero = np.flatnonzero(c != 0)
        if nonzero.size == 0:
            c = c[:0]
            object.__setattr__(self, "offset", 0)
        else:
            lo, hi = int(nonzero[0]), int(nonzero[-1])
            object.__setattr__(self, "offset", int(self.offset) + lo)
            c = c[lo : hi + 1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def support(self) -> tuple[int, int] | None:
        """(first, last) index carrying a coefficient, None for zero."""
        if self.is_zero:
            return None
        return self.offset, self.offset + self.coeffs.size - 1

    def at(self, k: int) -> complex:
        i = k - self.offset
        if 0 <= i < self.coeffs.size:
            return complex(self.coeffs[i])
        return 0.0 + 0.0j

    def conjugated(self) -> "CoeffSequence":
        return CoeffSequence(self.offset, np.conj(self.coeffs))

    def scaled(self, z: complex) -> "CoeffSequence":
        return CoeffSequence(self.offset, z * self.coeffs)


@dataclass(frozen=True, eq=False)
class MagnitudeSamples:
    """|f| on the half-integer grid start, start + 1/2, ..."""

    start: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size == 0:
            raise ValueError("samples must be nonempty")
        if not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite")
        if np.any(v < 0):
            raise ValueError("samples are magnitudes and must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "values", v)

    def grid(self) -> np.ndarray:
        return self.start + 0.5 * np.arange(self.values.size)


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the retrievability test on a coefficient sequence."""

    retrievable: bool
    support_gap: int | None = None
    im_positions: tuple = field(default_factory=tuple)


def check_criterion(c: CoeffSequence, tol: float = CROSS_IM_REL_TOL) -> CriterionReport:
    """Decide magnitude retrievability of the sequence.

    Retrievable iff no stored coefficient vanishes and at most one
    consecutive pair has Im(c(k) conj(c(k+1))) exceeding tol relative to
    the pair's modulus product.  The zero sequence passes vacuously.
    """
    if c.is_zero:
        return CriterionReport(retrievable=True)
    mods = np.abs(c.coeffs)
    scale = float(np.max(mods))
    zero_at = np.flatnonzero(mods <= tol * scale)
    if zero_at.size:
        return CriterionReport(retrievable=False, support_gap=int(zero_at[0]) + c.offset)
    cross = c.coeffs[:-1] * np.conj(c.coeffs[1:])
    significant = np.abs(cross.imag) > tol * np.abs(cross)
    positions = tuple(int(k) + c.offset for k in np.flatnonzero(significant))
    return CriterionReport(retrievable=len(positions) <= 1, im_positions=positions)


def conjugate_equivalent(a: CoeffSequence, b: CoeffSequence, tol: float = 1e-8) -> bool:
    """True iff b = z*a or b = z*conj(a) for some unimodular z.

    z is read off the leading coefficients; both branches are tested
    entrywise against an absolute tolerance scaled by the larger sequence.
    """
    if a.is_zero or b.is_zero:
        return a.is_zero and b.is_zero
    if a.offset != b.offset or a.coeffs.size != b.coeffs.size:
        return False
    atol = tol * max(1.0, float(np.max(np.abs(a.coeffs))), float(np.max(np.abs(b.coeffs))))
    for ref in (a.coeffs, np.conj(a.coeffs)):
        z = b.coeffs[0] / ref[0]
        if abs(abs(z) - 1.0) > tol:
            continue
        if np.max(np.abs(b.coeffs - z * ref)) <= atol:
            return True
    return False


def sample_magnitudes(c: CoeffSequence) -> MagnitudeSamples:
    """|f| on half-integers over [first - 1, last + 1].

    Integer samples are the coefficient moduli; midpoint samples are
    |c(k) + c(k+1)| / 2 with zeros padded outside the support.  The zero
    sequence yields the all-zero window [0, 1].
    """
    if c.is_zero:
        return MagnitudeSamples(0, np.zeros(3))
    padded = np.concatenate([[0.0 + 0.0j], c.coeffs, [0.0 + 0.0j]])
    values = np.empty(2 * padded.size - 1)
    values[0::2] = np.abs(padded)
    values[1::2] = 0.5 * np.abs(padded[:-1] + padded[1:])
    return MagnitudeSamples(c.offset - 1, values)


def _cross_terms(mods: np.ndarray, midpoints: np.ndarray, tol: float):
    """Re and |Im| of c(k) conj(c(k+1)) from the midpoint identity.

    The squared imaginary part is a difference of near-equal squares, so
    its cancellation noise sits near eps * scale^4 and the square root
    blows that up; values under a per-pair noise floor are zeroed outright.
    """
    re = 2.0 * midpoints**2 - 0.5 * (mods[:-1] ** 2 + mods[1:] ** 2)
    products = mods[:-1] * mods[1:]
    bound = products**2
    disc = bound - re**2
    bad = disc < -DISCRIMINANT_REL_TOL * np.maximum(bound, tol**2)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise InconsistentSamples(
            f"midpoint sample at pair {k} exceeds the interpolation bound"
        )
    im_abs = np.sqrt(np.clip(disc, 0.0, None))
    scale = float(np.max(mods))
    floor = np.maximum(
        CROSS_IM_REL_TOL * products,
        4.0 * scale * np.sqrt(np.finfo(float).eps * products),
    )
    im_abs[im_abs <= floor] = 0.0
    return re, im_abs


def recover(samples: MagnitudeSamples, tol: float = 1e-8) -> list:
    """All coefficient sequences consistent with the magnitude samples,
    one representative per conjugate-equivalence class.

    The grid must be half-integer, end on integers, and cover the support
    with a zero integer sample on each side.  Moduli come from integer
    samples, cross terms from midpoints; the leading coefficient is gauged
    real positive and the first sign-ambiguous position is resolved to +
    (its two signs are conjugate sequences).  Remaining signs branch, and
    branches are deduplicated.  Order follows the binary enumeration of
    sign patterns, + before -.
    """
    v = samples.values
    if v.size < 3 or v.size % 2 == 0:
        raise WindowMismatch("grid must span [a, b] with integer ends, a < b")
    scale = float(np.max(v))
    zthr = tol * (1.0 + scale)
    mods = v[0::2]
    midpoints = v[1::2]
    if mods[0] > zthr or mods[-1] > zthr:
        raise WindowMismatch("support touches the window boundary")
    live = np.flatnonzero(mods > zthr)
    if live.size == 0:
        if np.any(v > zthr):
            raise InconsistentSamples("midpoints nonzero over an empty support")
        return [CoeffSequence(0, np.zeros(0, dtype=complex))]
    lo, hi = int(live[0]), int(live[-1])
    if np.any(mods[lo : hi + 1] <= zthr):
        gap = int(np.flatnonzero(mods[lo : hi + 1] <= zthr)[0]) + lo + samples.start
        raise AmbiguousSupport(
            f"zero magnitude at interior point {gap} decouples the pieces"
        )
    # lo >= 1 and hi <= len(mods) - 2 here: the window ends were zero
    # midpoints outside [lo-1, hi] pair two vanishing coefficients
    outside = np.concatenate([midpoints[: lo - 1], midpoints[hi + 1 :]])
    if np.any(outside > zthr):
        raise InconsistentSamples("nonzero midpoint between vanishing coefficients")
    # boundary midpoints pair one vanishing coefficient with the edge one
    if abs(midpoints[lo - 1] - 0.5 * mods[lo]) > zthr:
        raise InconsistentSamples("left boundary midpoint off |c|/2")
    if abs(midpoints[hi] - 0.5 * mods[hi]) > zthr:
        raise InconsistentSamples("right boundary midpoint off |c|/2")

    r = mods[lo : hi + 1]
    offset = samples.start + lo
    if r.size == 1:
        return [CoeffSequence(offset, r.astype(complex))]
    re, im_abs = _cross_terms(r, midpoints[lo:hi], tol)
    ambiguous = np.flatnonzero(im_abs > 0.0)
    if ambiguous.size > MAX_BRANCH_POSITIONS:
        raise BranchLimitExceeded(
            f"{ambiguous.size} sign-ambiguous positions exceed the cap of "
            f"{MAX_BRANCH_POSITIONS}"
        )
    free = ambiguous[1:]  # first ambiguous sign pinned to +

    results: list[CoeffSequence] = []
    for pattern in range(1 << free.size):
        signs = np.ones(r.size - 1)
        for bit, pos in enumerate(free):
            if (pattern >> bit) & 1:
                signs[pos] = -1.0
        c = np.empty(r.size, dtype=complex)
        c[0] = r[0]
        for k in range(r.size - 1):
            cross = re[k] + 1j * signs[k] * im_abs[k]
            # cross = c(k) conj(c(k+1)), so c(k+1) = conj(cross) c(k) / r(k)^2
            c[k + 1] = np.conj(cross) * c[k] / (r[k] * r[k])
        candidate = CoeffSequence(offset, c)
        if not any(conjugate_equivalent(candidate, seen, tol) for seen in results):
            results.append(candidate)
    return results


def check_real_criterion(d, tol: float = 0.0) -> bool:
    """Real-coefficient retrievability: no zero entry strictly between the
    first and last nonzero entries.  Entries within tol (relative to the
    largest modulus) count as zero; the zero sequence passes."""
    d = np.asarray(d, dtype=float).reshape(-1)
    if d.size == 0:
        return True
    scale = float(np.max(np.abs(d)))
    if scale == 0.0:
        return True
    live = np.flatnonzero(np.abs(d) > tol * scale)
    lo, hi = int(live[0]), int(live[-1])
    return bool(np.all(np.abs(d[lo : hi + 1]) > tol * scale))
