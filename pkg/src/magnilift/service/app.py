"""FastAPI application exposing the library under /v1."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import handlers, schemas


def _run(handler, req):
    try:
        return handler(req)
    except handlers.InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(
        title="magnilift",
        version=__version__,
        description="Magnitude-only reconstruction and retrievability certificates.",
    )

    @app.get("/v1/health", response_model=schemas.HealthResponse)
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/reconstruct", response_model=schemas.ReconstructResponse)
    def reconstruct(req: schemas.ReconstructRequest):
        return _run(handlers.handle_reconstruct, req)

    @app.post("/v1/simplex-graph", response_model=schemas.SimplexGraphResponse)
    def simplex_graph(req: schemas.SimplexGraphRequest):
        return _run(handlers.handle_simplex_graph, req)

    @app.post("/v1/certify-range", response_model=schemas.CertifyRangeResponse)
    def certify_range(req: schemas.CertifyRangeRequest):
        return _run(handlers.handle_certify_range, req)

    @app.post("/v1/hat-check", response_model=schemas.HatCheckResponse)
    def hat_check(req: schemas.HatCheckRequest):
        return _run(handlers.handle_hat_check, req)

    @app.post("/v1/hat-recover", response_model=schemas.HatRecoverResponse)
    def hat_recover(req: schemas.HatRecoverRequest):
        return _run(handlers.handle_hat_recover, req)

    @app.post("/v1/quat-check", response_model=schemas.QuatCheckResponse)
    def quat_check(req: schemas.QuatCheckRequest):
        return _run(handlers.handle_quat_check, req)

    @app.post("/v1/affine-check", response_model=schemas.AffineCheckResponse)
    def affine_check(req: schemas.AffineCheckRequest):
        return _run(handlers.handle_affine_check, req)

    @app.post("/v1/gen")
    def gen(req: schemas.GenRequest) -> dict:
        return _run(handlers.handle_gen, req)

    @app.post("/v1/observe", response_model=schemas.ObserveResponse)
    def observe(req: schemas.FieldOnGraph):
        return _run(handlers.handle_observe, req)

    return app


app = create_app()
