"""FastAPI endpoints: /field, /orbit, /images, /limits, /validate.

Core exceptions map onto structured 400 responses whose ``kind`` field
distinguishes domain violations from convergence failures; clients key
their exit codes off that field rather than the status code.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, ops
from ..errors import ConvergenceError, DomainError
from . import schemas


def _error_response(kind: str, message: str, status_code: int = 400) -> JSONResponse:
    payload = schemas.ErrorPayload(kind=kind, message=message)
    return JSONResponse(status_code=status_code, content={"error": payload.model_dump()})


def create_app() -> FastAPI:
    app = FastAPI(
        title="qvortex",
        version=__version__,
        description="Point-vortex flow in a circular annulus",
    )

    @app.exception_handler(DomainError)
    async def _domain_handler(request: Request, exc: DomainError):
        return _error_response("domain", str(exc))

    @app.exception_handler(ConvergenceError)
    async def _convergence_handler(request: Request, exc: ConvergenceError):
        return _error_response("convergence", str(exc))

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/field", response_model=schemas.FieldResponse)
    def field(req: schemas.FieldRequest):
        sys = schemas.build_system(req.geometry, req.vortices)
        rows, meta = ops.field_grid(
            sys, req.grid.n_r, req.grid.n_theta, req.representation,
            policy=req.truncation.to_policy(), laurent_order=req.laurent_order,
        )
        points = [schemas.FieldPoint(x=x, y=y, u=u, v=v, psi=psi)
                  for x, y, u, v, psi in rows]
        return schemas.FieldResponse(metadata=meta, points=points)

    @app.post("/orbit", response_model=schemas.OrbitResponse)
    def orbit(req: schemas.OrbitRequest):
        sys = schemas.build_system(req.geometry, req.vortices)
        result = ops.orbit_run(sys, req.t_end, req.dt,
                               policy=req.truncation.to_policy())
        return schemas.OrbitResponse(
            times=result["times"],
            positions=result["positions"],
            summary=schemas.OrbitSummary(**result["summary"]),
        )

    @app.post("/images", response_model=schemas.ImagesResponse)
    def images(req: schemas.ImagesRequest):
        entries = ops.images_run(req.vortex.to_vortex(),
                                 req.geometry.to_geometry(), req.depth)
        return schemas.ImagesResponse(
            images=[schemas.ImageEntry(**entry) for entry in entries])

    @app.post("/limits", response_model=schemas.LimitsResponse)
    def limits(req: schemas.LimitsRequest):
        table = ops.limits_table(req.q_values, req.n_points, req.case,
                                 policy=req.truncation.to_policy())
        return schemas.LimitsResponse(
            rows=[schemas.LimitsRow(**row) for row in table["rows"]],
            monotone=table["monotone"],
        )

    @app.post("/validate", response_model=schemas.ValidateResponse)
    def validate(req: schemas.ValidateRequest):
        sys = schemas.build_system(req.geometry, req.vortices)
        report = ops.validate_system(
            sys, n_samples=req.n_samples,
            samples_per_circle=req.samples_per_circle, tol=req.tol,
            policy=req.truncation.to_policy(), laurent_order=req.laurent_order,
        )
        return schemas.ValidateResponse(**report)

    return app


app = create_app()
