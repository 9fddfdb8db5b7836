"""Deterministic JSON encoding and instance codecs.

All floats are written with 17 significant digits so that every finite
double round-trips exactly and identical data always serializes to
identical bytes.  The stdlib encoder formats floats via repr, which is
also exact but not pinned by any contract, so a small writer is used
instead; payloads here are plain dicts, lists, strings, numbers.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .affine import AffineSystem, Measurement
from .graphs import MagnitudeObservation, SimpleGraph, VectorField
from .quaternions import QuatFunction, Quaternion
from .splines import CoeffSequence, MagnitudeSamples

__all__ = [
    "dumps",
    "loads",
    "encode_field_instance",
    "decode_field_instance",
    "encode_range_matrix",
    "decode_range_matrix",
    "encode_spline",
    "decode_spline",
    "encode_samples",
    "decode_samples",
    "encode_quat_function",
    "decode_quat_function",
    "encode_affine_system",
    "decode_affine_system",
]


def _write(obj, out: list) -> None:
    if obj is None or obj is True or obj is False:
        out.append("null" if obj is None else "true" if obj else "false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite floats are not serializable")
        out.append(format(x, ".17g"))
    elif isinstance(obj, dict):
        out.append("{")
        for k, v in obj.items():
            if out[-1] != "{":
                out.append(",")
            if not isinstance(k, str):
                raise ValueError("object keys must be strings")
            out.append(json.dumps(k))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for v in obj:
            if out[-1] != "[":
                out.append(",")
            _write(v, out)
        out.append("]")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Compact deterministic JSON text, newline-terminated."""
    out: list = []
    _write(obj, out)
    out.append("\n")
    return "".join(out)


def loads(text: str):
    return json.loads(text)


def _float_rows(a: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.atleast_2d(a)]


def _require(d: dict, key: str):
    if key not in d:
        raise ValueError(f"missing key {key!r}")
    return d[key]


# ---------------------------------------------------------------- graphs

def encode_field_instance(
    graph: SimpleGraph,
    field: VectorField | None,
    observation: MagnitudeObservation,
) -> dict:
    d = {
        "kind": "field_instance",
        "dim": observation.dim if field is None else field.dim,
        "vertices": graph.vertex_count,
        "edges": [[int(i), int(j)] for (i, j) in graph.edges],
    }
    if field is not None:
        d["field"] = _float_rows(field.vectors)
    d["vertex_norms"] = [float(x) for x in observation.vertex_norms]
    d["edge_norms"] = [
        [int(i), int(j), float(v)] for (i, j), v in sorted(observation.edge_norms.items())
    ]
    return d


def decode_field_instance(d: dict):
    """Returns (graph, field or None, observation)."""
    n = int(_require(d, "vertices"))
    dim = int(_require(d, "dim"))
    graph = SimpleGraph(n, [(int(i), int(j)) for i, j in _require(d, "edges")])
    field = None
    if d.get("field") is not None:
        arr = np.array(d["field"], dtype=float)
        if arr.ndim != 2 or arr.shape != (n, dim):
            raise ValueError("field must be vertices x dim")
        field = VectorField(arr)
    vertex_norms = np.array(_require(d, "vertex_norms"), dtype=float)
    if vertex_norms.shape != (n,):
        raise ValueError("vertex_norms must list one value per vertex")
    edge_norms = {}
    for row in _require(d, "edge_norms"):
        i, j, v = int(row[0]), int(row[1]), float(row[2])
        edge_norms[(min(i, j), max(i, j))] = v
    if set(edge_norms) != set(graph.edges):
        raise ValueError("edge_norms must cover exactly the graph edges")
    obs = MagnitudeObservation(dim=dim, vertex_norms=vertex_norms, edge_norms=edge_norms)
    return graph, field, obs


# ------------------------------------------------------------- matrices

def encode_range_matrix(matrix: np.ndarray) -> dict:
    return {"kind": "range_matrix", "matrix": _float_rows(np.asarray(matrix, dtype=float))}


def decode_range_matrix(d: dict) -> np.ndarray:
    arr = np.array(_require(d, "matrix"), dtype=float)
    if arr.ndim != 2:
        raise ValueError("matrix must be 2-D")
    return arr


# -------------------------------------------------------------- splines

def encode_spline(seq: CoeffSequence) -> dict:
    return {
        "kind": "spline",
        "offset": int(seq.offset),
        "coeffs": [[float(c.real), float(c.imag)] for c in seq.coeffs],
    }


def decode_spline(d: dict) -> CoeffSequence:
    rows = _require(d, "coeffs")
    coeffs = np.array([complex(r[0], r[1]) for r in rows], dtype=complex)
    return CoeffSequence(int(d.get("offset", 0)), coeffs)


def encode_samples(samples: MagnitudeSamples) -> dict:
    return {
        "kind": "samples",
        "start": int(samples.start),
        "values": [float(v) for v in samples.values],
    }


def decode_samples(d: dict) -> MagnitudeSamples:
    return MagnitudeSamples(int(_require(d, "start")), np.array(_require(d, "values"), dtype=float))


# ----------------------------------------------------------- quaternions

def encode_quat_function(f: QuatFunction) -> dict:
    return {
        "kind": "quat_function",
        "values": [[q.a, q.b, q.c, q.d] for q in f.values],
    }


def decode_quat_function(d: dict) -> QuatFunction:
    arr = np.array(_require(d, "values"), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError("values must be n x 4")
    return QuatFunction.from_array(arr)


# ---------------------------------------------------------------- affine

def encode_affine_system(sys: AffineSystem) -> dict:
    return {
        "kind": "affine_system",
        "p": sys.coeff_dim,
        "measurements": [
            {"phi": _float_rows(m.matrix), "refs": _float_rows(m.references)}
            for m in sys.measurements
        ],
    }


def decode_affine_system(d: dict) -> AffineSystem:
    p = int(_require(d, "p"))
    sites = []
    for entry in _require(d, "measurements"):
        phi = np.array(_require(entry, "phi"), dtype=float)
        refs = np.array(_require(entry, "refs"), dtype=float)
        if phi.ndim != 2 or phi.shape[1] != p:
            raise ValueError("phi must be d x p")
        sites.append(Measurement(phi, refs))
    return AffineSystem(tuple(sites))
