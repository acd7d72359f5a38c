"""FastAPI app wrapping the surrogate-modeling library."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import (
    CaseUnavailable,
    InvalidAxis,
    InvalidInput,
    MLoewnerError,
)
from . import handlers
from . import schemas as s

_USAGE_ERRORS = (InvalidInput, InvalidAxis, CaseUnavailable, ValueError, KeyError)


def _guard(fn, *args):
    try:
        return fn(*args)
    except _USAGE_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except MLoewnerError as exc:
        raise HTTPException(
            status_code=422, detail=f"{type(exc).__name__}: {exc}"
        ) from exc


def create_app() -> FastAPI:
    app = FastAPI(
        title="mloewner",
        description="Rational surrogate models for dense grid tensors",
    )

    @app.get("/health", response_model=s.HealthResponse)
    def health():
        from .. import __version__

        return s.HealthResponse(status="ok", version=__version__)

    @app.get("/catalog", response_model=list[s.CatalogEntry])
    def catalog():
        return handlers.catalog()

    @app.post("/sample", response_model=s.SampleResponse)
    def sample(req: s.SampleRequest):
        return _guard(handlers.sample, req)

    @app.post("/fit", response_model=s.FitResponse)
    def fit(req: s.FitRequest):
        return _guard(handlers.fit, req)

    @app.post("/eval", response_model=s.EvalResponse)
    def evaluate(req: s.EvalRequest):
        return _guard(handlers.evaluate, req)

    @app.post("/convert", response_model=s.ConvertResponse)
    def convert(req: s.ConvertRequest):
        return _guard(handlers.convert, req)

    @app.post("/complexity", response_model=s.ComplexityPayload)
    def complexity(req: s.ComplexityRequest):
        return _guard(handlers.complexity_report, req)

    @app.post("/bench", response_model=s.BenchResponse)
    def bench(req: s.BenchRequest):
        return _guard(handlers.bench, req)

    return app


app = create_app()
