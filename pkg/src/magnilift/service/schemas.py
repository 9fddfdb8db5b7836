"""Request and response models for the service endpoints.

Every request model forbids unknown keys so typos fail loudly instead of
being ignored.  Instances produced by the generator parse directly as the
corresponding models (the optional "kind" tags match).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ----------------------------------------------------------- graph side

class FieldInstance(StrictModel):
    """A graph, its magnitude observation, and optionally the true field."""

    kind: Literal["field_instance"] = "field_instance"
    dim: int = Field(ge=1)
    vertices: int = Field(ge=0)
    edges: list[tuple[int, int]]
    field: Optional[list[list[float]]] = None
    vertex_norms: list[float]
    edge_norms: list[tuple[int, int, float]]


class FieldOnGraph(StrictModel):
    """A graph plus a full field; input to the observe endpoint."""

    dim: int = Field(ge=1)
    vertices: int = Field(ge=0)
    edges: list[tuple[int, int]]
    field: list[list[float]]


class ReconstructRequest(StrictModel):
    instance: FieldInstance
    method: Literal["auto", "complete", "propagate"] = "auto"
    tol: Optional[float] = Field(default=None, gt=0)


class ReconstructResponse(StrictModel):
    status: Literal["Ok", "NoSimplex"]
    certified_unique: bool
    method: Optional[Literal["CompleteGram", "SimplexPropagation"]] = None
    field: Optional[list[list[float]]] = None
    residual: Optional[float] = None
    unreached: list[int] = []


class SimplexGraphRequest(StrictModel):
    instance: FieldInstance
    tol: Optional[float] = Field(default=None, gt=0)


class SimplexGraphResponse(StrictModel):
    dim: int
    simplices: list[list[int]]
    edges: list[tuple[int, int]]
    connected: bool
    uncovered: list[int]
    certified: bool


class ObserveResponse(StrictModel):
    kind: Literal["field_instance"] = "field_instance"
    dim: int
    vertices: int
    edges: list[tuple[int, int]]
    field: list[list[float]]
    vertex_norms: list[float]
    edge_norms: list[tuple[int, int, float]]


# ------------------------------------------------------- range certifier

class CertifyRangeRequest(StrictModel):
    matrix: list[list[float]]
    vector: Optional[list[tuple[float, float]]] = None
    tol: Optional[float] = Field(default=None, gt=0)
    budget: int = Field(default=100_000, ge=0)
    seed: int = Field(default=0, ge=0)


class WitnessSplit(StrictModel):
    x1: list[tuple[float, float]]
    x2: list[tuple[float, float]]


class CertifyRangeResponse(StrictModel):
    status: Literal["ConjugatePR", "NotConjugatePR", "Inconclusive"]
    nullspace_dim: int
    witness: Optional[list[list[float]]] = None
    witness_split: Optional[WitnessSplit] = None
    detail: str = ""


# -------------------------------------------------------------- splines

class HatSpline(StrictModel):
    kind: Literal["spline"] = "spline"
    offset: int = 0
    coeffs: list[tuple[float, float]]


class SamplesModel(StrictModel):
    kind: Literal["samples"] = "samples"
    start: int
    values: list[float]


class HatCheckRequest(StrictModel):
    spline: HatSpline
    tol: Optional[float] = Field(default=None, gt=0)


class HatCheckResponse(StrictModel):
    retrievable: bool
    support_gap: Optional[int] = None
    im_positions: list[int] = []


class HatRecoverRequest(StrictModel):
    samples: SamplesModel
    tol: Optional[float] = Field(default=None, gt=0)


class HatRecoverResponse(StrictModel):
    count: int
    classes: list[HatSpline]


# ----------------------------------------------------------- quaternions

class QuatFunctionModel(StrictModel):
    kind: Literal["quat_function"] = "quat_function"
    values: list[tuple[float, float, float, float]]


class QuatCheckRequest(StrictModel):
    function: QuatFunctionModel
    candidates: list[QuatFunctionModel] = []
    tol: Optional[float] = Field(default=None, gt=0)
    budget: int = Field(default=10_000, ge=0)
    seed: int = Field(default=0, ge=0)


class QuatPair(StrictModel):
    u: list[tuple[float, float, float, float]]
    v: list[tuple[float, float, float, float]]


class QuatCandidateVerdict(StrictModel):
    magnitudes_match: bool
    in_orbit: Optional[bool] = None


class QuatCheckResponse(StrictModel):
    verdict: Literal["retrievable_certified", "counterexample", "inconclusive"]
    counterexample: Optional[QuatPair] = None
    candidates: list[QuatCandidateVerdict] = []
    detail: str = ""


# ---------------------------------------------------------------- affine

class AffineSiteModel(StrictModel):
    phi: list[list[float]]
    refs: list[list[float]]


class AffineSystemModel(StrictModel):
    kind: Literal["affine_system"] = "affine_system"
    p: int = Field(ge=1)
    measurements: list[AffineSiteModel]


class AffineCheckRequest(StrictModel):
    system: AffineSystemModel
    tol: Optional[float] = Field(default=None, gt=0)
    budget: int = Field(default=200, ge=0)
    seed: int = Field(default=0, ge=0)


class AffinePair(StrictModel):
    f: list[float]
    g: list[float]


class AffineCheckResponse(StrictModel):
    verdict: Literal["CERTIFIED_YES", "CERTIFIED_NO", "INCONCLUSIVE"]
    certificate: str = ""
    counterexample: Optional[AffinePair] = None
    detail: str = ""


# ------------------------------------------------------------ generation

class RangeMatrixInstance(StrictModel):
    kind: Literal["range_matrix"] = "range_matrix"
    matrix: list[list[float]]


class GenRequest(StrictModel):
    seed: int = Field(ge=0, lt=2**64)
    kind: str
    params: dict = {}


class HealthResponse(StrictModel):
    status: Literal["ok"]
    version: str


def shipped_schema(name: str) -> dict:
    """Load one of the JSON Schema files shipped with the package."""
    import json
    from importlib.resources import files

    path = files("magnilift").joinpath("schemas", f"{name}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


# one JSON Schema file per wire format is shipped under magnilift/schemas;
# tests regenerate these from the models and fail on any drift
SCHEMA_EXPORTS = {
    "field_instance": FieldInstance,
    "range_matrix": RangeMatrixInstance,
    "spline": HatSpline,
    "samples": SamplesModel,
    "quat_function": QuatFunctionModel,
    "affine_system": AffineSystemModel,
    "reconstruct_response": ReconstructResponse,
    "simplex_graph_response": SimplexGraphResponse,
    "certify_range_response": CertifyRangeResponse,
    "hat_check_response": HatCheckResponse,
    "hat_recover_response": HatRecoverResponse,
    "quat_check_response": QuatCheckResponse,
    "affine_check_response": AffineCheckResponse,
    "health_response": HealthResponse,
}
