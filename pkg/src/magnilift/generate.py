"""Synthetic instance generation for tests and benchmarks.

Every generator is a pure function of a ``GenSpec``: the same seed and
parameters produce bit-identical instances.  Randomness comes from numpy's
``default_rng`` (PCG64, 64-bit seed), the one PRNG used across the
package, so documented seeds reproduce exactly.

Instance flavors:

  * ``RandomField``: i.i.d. standard normal field on a chosen graph;
  * ``CirculantCounterexample``: the even cycle with alternating
    orthonormal basis vectors, whose magnitude data admits several
    non-equivalent fields;
  * ``GluedSimplices``: a chain of (d+1)-cliques overlapping in d
    vertices, built to satisfy the uniqueness hypotheses;
  * ``RandomRangeMatrix``: a full-column-rank measurement matrix;
  * ``RandomSpline``: complex coefficients on consecutive integers;
  * ``RandomAffineSystem``: random matrices and reference groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _jsonio
from .affine import AffineSystem, Measurement
from .graphs import SimpleGraph, VectorField, observe
from .simplex import build_simplex_graph, check_uniqueness_hypotheses
from .splines import CoeffSequence

__all__ = [
    "GenSpec",
    "KINDS",
    "generate",
    "circulant_counterexample_fields",
]

KINDS = (
    "RandomField",
    "CirculantCounterexample",
    "GluedSimplices",
    "RandomRangeMatrix",
    "RandomSpline",
    "RandomAffineSystem",
)

_GRAPHS = ("complete", "cycle", "path")


@dataclass(frozen=True)
class GenSpec:
    """Seeded recipe for one synthetic instance."""

    seed: int
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        s = int(self.seed)
        if not 0 <= s < 2**64:
            raise ValueError("seed must fit in 64 bits")
        object.__setattr__(self, "seed", s)
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "params", dict(self.params))


def _int_param(params: dict, name: str, default, low: int) -> int:
    value = params.get(name, default)
    if value is None:
        raise ValueError(f"parameter {name!r} is required")
    value = int(value)
    if value < low:
        raise ValueError(f"parameter {name!r} must be >= {low}")
    return value


def circulant_counterexample_fields(n: int):
    """Two fields on the even cycle with identical magnitude data.

    Vertices alternate between the two planar basis directions; all vertex
    norms are 1 and all edge differences are sqrt(2) regardless of signs.
    Flipping the sign at vertex 0 only cannot be undone by any orthogonal
    map once another even vertex keeps its sign, so the two fields are
    genuinely distinct realizations.
    """
    n = int(n)
    if n < 4 or n % 2 != 0:
        raise ValueError("the cycle counterexample needs an even n >= 4")
    rows = np.zeros((n, 2))
    rows[0::2, 0] = 1.0
    rows[1::2, 1] = 1.0
    flipped = rows.copy()
    flipped[0] *= -1.0
    return VectorField(rows), VectorField(flipped)


def _gen_random_field(rng, params):
    n = _int_param(params, "n", 6, 1)
    d = _int_param(params, "d", 2, 1)
    shape = params.get("graph", "complete")
    if shape not in _GRAPHS:
        raise ValueError(f"graph must be one of {_GRAPHS}")
    if shape == "complete":
        graph = SimpleGraph.complete(n)
    elif shape == "cycle":
        graph = SimpleGraph.cycle(n)
    else:
        graph = SimpleGraph.path(n)
    fld = VectorField(rng.standard_normal((n, d)))
    return _jsonio.encode_field_instance(graph, fld, observe(graph, fld))


def _gen_circulant(rng, params):
    n = _int_param(params, "n", 4, 4)
    fld, _ = circulant_counterexample_fields(n)
    graph = SimpleGraph.cycle(n)
    return _jsonio.encode_field_instance(graph, fld, observe(graph, fld))


def _glued_graph(d: int, length: int) -> SimpleGraph:
    # clique k covers the vertex window {k, ..., k+d}
    n = d + length
    edges = set()
    for k in range(length):
        window = range(k, k + d + 1)
        edges.update((i, j) for i in window for j in window if i < j)
    return SimpleGraph(n, sorted(edges))


def _gen_glued_simplices(rng, params):
    d = _int_param(params, "d", 2, 1)
    length = _int_param(params, "length", 3, 1)
    graph = _glued_graph(d, length)
    # generic fields qualify almost surely; retry draws stay deterministic
    for _ in range(50):
        fld = VectorField(rng.standard_normal((graph.vertex_count, d)))
        obs = observe(graph, fld)
        report = check_uniqueness_hypotheses(build_simplex_graph(graph, obs, d), graph)
        if report.certified:
            return _jsonio.encode_field_instance(graph, fld, obs)
    raise RuntimeError("could not draw a field meeting the uniqueness hypotheses")


def _gen_range_matrix(rng, params):
    m = _int_param(params, "m", 4, 1)
    n = _int_param(params, "n", 2, 1)
    if m < n:
        raise ValueError("need at least as many rows as columns for full rank")
    for _ in range(50):
        A = rng.standard_normal((m, n))
        if np.linalg.matrix_rank(A) == n:
            return _jsonio.encode_range_matrix(A)
    raise RuntimeError("could not draw a full-column-rank matrix")


def _gen_spline(rng, params):
    length = _int_param(params, "length", 4, 1)
    offset = int(rng.integers(-3, 4))
    coeffs = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    return _jsonio.encode_spline(CoeffSequence(offset, coeffs))


def _gen_affine_system(rng, params):
    m = _int_param(params, "m", 2, 1)
    p = _int_param(params, "n", 2, 1)
    d = _int_param(params, "d", 1, 1)
    n_refs = _int_param(params, "N", 2, 1)
    sites = tuple(
        Measurement(rng.standard_normal((d, p)), rng.standard_normal((n_refs, d)))
        for _ in range(m)
    )
    return _jsonio.encode_affine_system(AffineSystem(sites))


_GENERATORS = {
    "RandomField": _gen_random_field,
    "CirculantCounterexample": _gen_circulant,
    "GluedSimplices": _gen_glued_simplices,
    "RandomRangeMatrix": _gen_range_matrix,
    "RandomSpline": _gen_spline,
    "RandomAffineSystem": _gen_affine_system,
}


def generate(spec: GenSpec) -> dict:
    """Produce the JSON-ready instance described by ``spec``."""
    rng = np.random.default_rng(spec.seed)
    return _GENERATORS[spec.kind](rng, spec.params)
