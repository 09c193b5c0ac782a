"""FastAPI application wrapping the analysis library.

Error contract: invalid definitions, dimensions or parameters answer
400 (schema violations answer 422 from validation); numerical failures
(overflow, eigen non-convergence) answer 500 with a ``kind: numerical``
marker in the detail.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__, dynamics, hamilton, kcc, lagrange, quadric, sweep
from ..expressions import EvaluationError
from ..linalg import LinAlgError
from ..vectorfield import SIGN_CONVENTION, VectorFieldModel, field_value, jacobian, load_system
from . import schemas

TOOL_NAME = "kccflow"


def _numerical_error(exc: Exception) -> HTTPException:
    return HTTPException(status_code=500, detail={"kind": "numerical", "message": str(exc)})


def _model_from(spec: schemas.SystemSpec) -> VectorFieldModel:
    try:
        return load_system(spec.definition())
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _vector(values, n: int, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise HTTPException(status_code=400, detail=f"{name} must have dimension {n}")
    if not np.all(np.isfinite(v)):
        raise HTTPException(status_code=400, detail=f"{name} must be finite")
    return v


def _matrix(a: np.ndarray) -> schemas.MatrixPayload:
    return schemas.MatrixPayload(
        rows=int(a.shape[0]), cols=int(a.shape[1]), data=[float(v) for v in a.ravel()]
    )


def create_app() -> FastAPI:
    app = FastAPI(title="kccflow analysis service", version=__version__)

    @app.get("/health", response_model=schemas.ToolInfo)
    def health() -> schemas.ToolInfo:
        return schemas.ToolInfo(name=TOOL_NAME, version=__version__)

    @app.post("/analyze", response_model=schemas.AnalysisReport)
    def analyze(request: schemas.AnalyzeRequest) -> schemas.AnalysisReport:
        m = _model_from(request.system)
        x = _vector(request.point, m.n, "point")
        try:
            if request.velocity is None:
                y = field_value(m, x)
            else:
                y = _vector(request.velocity, m.n, "velocity")
            report = kcc.jacobi_classify(m, x, y)
            geometry = lagrange.lagrange_geometry(m, x)
            return schemas.AnalysisReport(
                tool=schemas.ToolInfo(name=TOOL_NAME, version=__version__),
                system=request.system.definition(),
                state=schemas.StatePayload(
                    x=[float(v) for v in x],
                    y=[float(v) for v in y],
                    p=[float(v) for v in hamilton.legendre_momenta(m, x, y)],
                ),
                jacobian=_matrix(jacobian(m, x)),
                semispray=[float(v) for v in lagrange.semispray(m, x, y)],
                nonlinear_connection=_matrix(geometry.connection),
                d_torsions=[_matrix(r) for r in geometry.torsions],
                yang_mills_energy=geometry.energy,
                hamilton_connection=_matrix(hamilton.hamilton_connection(m, x)),
                hamilton_torsions=[_matrix(r) for r in hamilton.hamilton_torsions(m, x)],
                first_invariant=[float(v) for v in report.first_invariant],
                deviation_matrix=_matrix(report.p_matrix),
                spectrum=[[float(z.real), float(z.imag)] for z in report.spectrum],
                verdict=report.verdict,
                sign_convention=SIGN_CONVENTION,
            )
        except (EvaluationError, LinAlgError) as exc:
            raise _numerical_error(exc)

    @app.post("/stability", response_model=schemas.StabilityResponse)
    def stability(request: schemas.StabilityRequest) -> schemas.StabilityResponse:
        m = _model_from(request.system)
        try:
            result = dynamics.equilibria(m)
            return schemas.StabilityResponse(
                csv=dynamics.stability_csv(m, result), skipped=list(result.skipped)
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (EvaluationError, LinAlgError) as exc:
            raise _numerical_error(exc)

    @app.post("/integrate", response_model=schemas.IntegrateResponse)
    def integrate(request: schemas.IntegrateRequest) -> schemas.IntegrateResponse:
        m = _model_from(request.system)
        x0 = _vector(request.x0, m.n, "x0")
        if request.residual and request.mode != "flow":
            raise HTTPException(status_code=400, detail="residual column is a flow-mode option")
        try:
            if request.mode == "flow":
                traj = dynamics.integrate_flow(m, x0, request.h, request.steps)
            else:
                if request.y0 is None or request.y0 == "X":
                    y0 = field_value(m, x0)
                else:
                    y0 = _vector(request.y0, m.n, "y0")
                traj = dynamics.integrate_euler_lagrange(m, x0, y0, request.h, request.steps)
            csv = dynamics.trajectory_csv(m, traj, residual=request.residual)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (EvaluationError, LinAlgError) as exc:
            raise _numerical_error(exc)
        return schemas.IntegrateResponse(
            csv=csv, truncated=traj.truncated, truncated_at=traj.truncated_at
        )

    @app.post("/surface", response_model=schemas.SurfaceResponse)
    def surface(request: schemas.SurfaceRequest) -> schemas.SurfaceResponse:
        m = _model_from(request.system)
        try:
            q = quadric.energy_quadratic_form(m)
            mesh = quadric.sample_surface(
                q, request.rho, request.resolution, request.axial_extent
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        content = quadric.mesh_to_obj(mesh) if request.format == "obj" else quadric.mesh_to_csv(mesh)
        return schemas.SurfaceResponse(
            classification=q.classification, format=request.format, content=content
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def run_sweep(request: schemas.SweepRequest) -> schemas.SweepResponse:
        m = _model_from(request.system)
        try:
            axes = [
                sweep.make_axis(ax.path, ax.lo, ax.hi, ax.step, m.n) for ax in request.axes
            ]
            csv = sweep.sweep_stability(m, axes, workers=request.workers)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (EvaluationError, LinAlgError) as exc:
            raise _numerical_error(exc)
        return schemas.SweepResponse(csv=csv)

    return app


app = create_app()
