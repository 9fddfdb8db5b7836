"""Shared request handlers.

Each handler takes a validated request model and returns a JSON-ready
dict of plain Python values.  The HTTP routes and the CLI subcommands
both call these, so verdicts, field layouts and error behavior cannot
drift between the two front ends.

Domain failures (inconsistent data, dimension mismatches, infeasible
samples) surface as InputError; front ends map it to HTTP 400 or exit
code 1.  Inconclusive verdicts are ordinary payloads, not errors.
"""

from __future__ import annotations

import numpy as np

from .. import _jsonio
from ..affine import check_affine_pr
from ..conjugate import certify_range_space, certify_vector
from ..generate import GenSpec, generate
from ..graphs import SimpleGraph, VectorField, observe
from ..quaternions import quat_conjugate_pr_check
from ..reconstruct import (
    ReconstructionError,
    reconstruct_complete,
    reconstruct_propagate,
)
from ..simplex import build_simplex_graph, check_uniqueness_hypotheses
from ..splines import check_criterion, recover
from . import schemas

__all__ = [
    "InputError",
    "handle_reconstruct",
    "handle_simplex_graph",
    "handle_certify_range",
    "handle_hat_check",
    "handle_hat_recover",
    "handle_quat_check",
    "handle_affine_check",
    "handle_gen",
    "handle_observe",
    "exit_code",
]

# module-internal status names -> wire names
_STATUS_WIRE = {"ok": "Ok", "no_simplex": "NoSimplex"}
_METHOD_WIRE = {"complete_gram": "CompleteGram", "simplex_propagation": "SimplexPropagation"}


class InputError(ValueError):
    """Semantically invalid input (bad data rather than bad syntax)."""


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, KeyError, ReconstructionError) as exc:
        raise InputError(str(exc)) from exc


def _rows(a) -> list:
    return [[float(x) for x in row] for row in np.atleast_2d(a)]


def _complex_pairs(v) -> list:
    return [(float(z.real), float(z.imag)) for z in np.asarray(v).ravel()]


def _decode_instance(model: schemas.FieldInstance):
    return _guard(_jsonio.decode_field_instance, model.model_dump())


def handle_reconstruct(req: schemas.ReconstructRequest) -> dict:
    graph, _, obs = _decode_instance(req.instance)
    kwargs = {} if req.tol is None else {"tol": req.tol}
    if req.method == "complete" or (req.method == "auto" and graph.is_complete):
        result = _guard(reconstruct_complete, obs, graph, obs.dim, **kwargs)
    else:
        result = _guard(reconstruct_propagate, obs, graph, obs.dim, **kwargs)
    return {
        "status": _STATUS_WIRE[result.status],
        "certified_unique": bool(result.certified_unique),
        "method": _METHOD_WIRE[result.method],
        "field": None if result.field is None else _rows(result.field.vectors),
        "residual": None if result.residual is None else float(result.residual),
        "unreached": [int(v) for v in result.unreached],
    }


def handle_simplex_graph(req: schemas.SimplexGraphRequest) -> dict:
    graph, _, obs = _decode_instance(req.instance)
    kwargs = {} if req.tol is None else {"tol": req.tol}
    sg = _guard(build_simplex_graph, graph, obs, obs.dim, **kwargs)
    report = check_uniqueness_hypotheses(sg, graph)
    return {
        "dim": sg.dim,
        "simplices": [list(s) for s in sg.simplices],
        "edges": [list(e) for e in sg.edges],
        "connected": report.connected,
        "uncovered": list(report.uncovered),
        "certified": report.certified,
    }


def handle_certify_range(req: schemas.CertifyRangeRequest) -> dict:
    A = np.array(req.matrix, dtype=float)
    kwargs = {"search_budget": req.budget, "seed": req.seed}
    if req.tol is not None:
        kwargs["tol"] = req.tol
    if req.vector is None:
        verdict = _guard(certify_range_space, A, **kwargs)
    else:
        x = np.array([complex(re, im) for re, im in req.vector])
        verdict = _guard(certify_vector, A, x, **kwargs)
    out = {
        "status": verdict.status,
        "nullspace_dim": int(verdict.nullspace_dim),
        "witness": None,
        "witness_split": None,
        "detail": verdict.detail,
    }
    if verdict.witness_matrix is not None:
        out["witness"] = _rows(verdict.witness_matrix)
    if verdict.witness_split is not None:
        x1, x2 = verdict.witness_split
        out["witness_split"] = {"x1": _complex_pairs(x1), "x2": _complex_pairs(x2)}
    return out


def handle_hat_check(req: schemas.HatCheckRequest) -> dict:
    seq = _guard(_jsonio.decode_spline, req.spline.model_dump())
    kwargs = {} if req.tol is None else {"tol": req.tol}
    report = check_criterion(seq, **kwargs)
    return {
        "retrievable": report.retrievable,
        "support_gap": None if report.support_gap is None else int(report.support_gap),
        "im_positions": [int(k) for k in report.im_positions],
    }


def handle_hat_recover(req: schemas.HatRecoverRequest) -> dict:
    samples = _guard(_jsonio.decode_samples, req.samples.model_dump())
    kwargs = {} if req.tol is None else {"tol": req.tol}
    classes = _guard(recover, samples, **kwargs)
    return {
        "count": len(classes),
        "classes": [_jsonio.encode_spline(c) for c in classes],
    }


def handle_quat_check(req: schemas.QuatCheckRequest) -> dict:
    f = _guard(_jsonio.decode_quat_function, req.function.model_dump())
    cands = tuple(
        _guard(_jsonio.decode_quat_function, c.model_dump()) for c in req.candidates
    )
    kwargs = {"search_budget": req.budget, "seed": req.seed}
    if req.tol is not None:
        kwargs["tol"] = req.tol
    report = _guard(quat_conjugate_pr_check, f, cands, **kwargs)
    out = {
        "verdict": report.verdict,
        "counterexample": None,
        "candidates": [
            {
                "magnitudes_match": c.magnitudes_match,
                "in_orbit": c.in_orbit,
            }
            for c in report.candidates
        ],
        "detail": report.detail,
    }
    if report.counterexample is not None:
        u, v = report.counterexample
        out["counterexample"] = {
            "u": _jsonio.encode_quat_function(u)["values"],
            "v": _jsonio.encode_quat_function(v)["values"],
        }
    return out


def handle_affine_check(req: schemas.AffineCheckRequest) -> dict:
    sys = _guard(_jsonio.decode_affine_system, req.system.model_dump())
    kwargs = {"falsify_budget": req.budget, "seed": req.seed}
    if req.tol is not None:
        kwargs["tol"] = req.tol
    report = check_affine_pr(sys, **kwargs)
    out = {
        "verdict": report.verdict,
        "certificate": report.certificate,
        "counterexample": None,
        "detail": report.detail,
    }
    if report.counterexample is not None:
        f, g = report.counterexample
        out["counterexample"] = {
            "f": [float(x) for x in f],
            "g": [float(x) for x in g],
        }
    return out


def handle_gen(req: schemas.GenRequest) -> dict:
    spec = _guard(GenSpec, req.seed, req.kind, req.params)
    return _guard(generate, spec)


def handle_observe(req: schemas.FieldOnGraph) -> dict:
    graph = _guard(SimpleGraph, req.vertices, [tuple(e) for e in req.edges])
    fld = _guard(VectorField, req.field)
    if fld.dim != req.dim:
        raise InputError("field width disagrees with dim")
    obs = _guard(observe, graph, fld)
    return _jsonio.encode_field_instance(graph, fld, obs)


_INCONCLUSIVE = {"Inconclusive", "inconclusive", "INCONCLUSIVE"}


def exit_code(result: dict) -> int:
    """0 for definitive outputs, 2 when the verdict is inconclusive."""
    for key in ("status", "verdict"):
        if result.get(key) in _INCONCLUSIVE:
            return 2
    return 0
