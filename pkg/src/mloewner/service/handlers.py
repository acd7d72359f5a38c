"""Service operations: thin compositions of the library modules.

Both the HTTP routes and the CLI dispatch through these functions, so
the two surfaces cannot drift apart.  No numerics live here.
"""

from __future__ import annotations

import csv
import io
import tempfile

import numpy as np

from .. import benchmark, complexity
from ..adaptive import AdaptiveConfig, fit_adaptive
from ..direct import FitConfig, fit_direct
from ..errors import InvalidInput
from ..grid import GridTensor, linspace_axis, sample_grid
from ..models import (
    eval_barycentric_batch,
    eval_monomial_batch,
    eval_kst,
    emit_network_graph,
    to_kst,
    to_monomial,
)
from . import schemas as s


def _case_axes(case, bounds, grid):
    b = [tuple(x) for x in bounds] if bounds else list(case.bounds)
    g = list(grid) if grid else list(case.grid_sizes)
    if len(b) != case.omega or len(g) != case.omega:
        raise InvalidInput(f"case {case.id} needs {case.omega} bounds and grid sizes")
    return [linspace_axis(f"x{l + 1}", lo, hi, n) for l, ((lo, hi), n) in enumerate(zip(b, g))]


def sample(req: s.SampleRequest) -> s.SampleResponse:
    case = benchmark.get_case(req.case)
    if not case.available:
        raise benchmark.CaseUnavailable(f"case {case.id} has no formula registered")
    tensor = sample_grid(case.formula, _case_axes(case, req.bounds, req.grid))
    return s.SampleResponse(tensor=s.TensorPayload.from_tensor(tensor))


def _fit_source(req: s.FitRequest) -> GridTensor:
    if (req.case is None) == (req.tensor is None):
        raise InvalidInput("provide exactly one of case or tensor")
    if req.tensor is not None:
        return req.tensor.to_tensor()
    case = benchmark.get_case(req.case)
    if not case.available:
        raise benchmark.CaseUnavailable(f"case {case.id} has no formula registered")
    return sample_grid(case.formula, _case_axes(case, req.bounds, req.grid))


def fit(req: s.FitRequest) -> s.FitResponse:
    if req.method == "adaptive" and (req.tol_ord is not None or req.k is not None):
        raise InvalidInput("tol_ord/k apply to the direct method only")
    if req.method == "direct" and req.tol is not None:
        raise InvalidInput("tol applies to the adaptive method only")
    tensor = _fit_source(req)
    if req.method == "direct":
        config = FitConfig(
            tol_ord=1e-6 if req.tol_ord is None else req.tol_ord,
            null_method=req.null_method,
            tol_k=req.tol_k,
            max_k=req.max_k,
            k=None if req.k is None else tuple(req.k),
        )
        model, report = fit_direct(tensor, config=config)
        return s.FitResponse(
            model=s.ModelPayload.from_model(model),
            k=list(model.k),
            complexity=s.ComplexityPayload.from_report(report),
        )
    config = AdaptiveConfig(
        tol=1e-15 if req.tol is None else req.tol,
        null_method=req.null_method,
        max_iters=req.max_iters,
    )
    model, trace = fit_adaptive(tensor, config=config)
    return s.FitResponse(
        model=s.ModelPayload.from_model(model),
        k=list(model.k),
        complexity=s.ComplexityPayload.from_report(complexity.report_for(model.k)),
        status="ok" if trace.converged else trace.status,
        trace=[
            s.TraceRowPayload(
                iteration=st.iteration,
                added_variables=list(st.added_variables),
                node=None if st.node is None else list(st.node),
                max_residual=st.max_residual,
                k=list(st.k),
            )
            for st in trace.steps
        ],
    )


def evaluate(req: s.EvalRequest) -> s.EvalResponse:
    model = req.model.to_model()
    points = np.asarray(req.points, dtype=float)
    if points.ndim != 2 or points.shape[1] != model.omega:
        raise InvalidInput(f"points must be rows of {model.omega} coordinates")
    if req.form == "barycentric":
        values = eval_barycentric_batch(model, points)
    elif req.form == "monomial":
        values = eval_monomial_batch(to_monomial(model), points)
    else:
        kst = to_kst(model)
        values = np.array([eval_kst(kst, x) for x in points])
    return s.EvalResponse(values=values.tolist())


def convert(req: s.ConvertRequest) -> s.ConvertResponse:
    model = req.model.to_model()
    if req.to == "monomial":
        return s.ConvertResponse(monomial=s.MonomialPayload.from_model(to_monomial(model)))
    if req.to == "kst":
        kst = to_kst(model)
        return s.ConvertResponse(
            kst=s.KstPayload(
                lambdas=[x.tolist() for x in kst.lambdas],
                barys=[b.tolist() for b in kst.barys],
                values=kst.values.tolist(),
            )
        )
    return s.ConvertResponse(graph=emit_network_graph(model, req.part))


def complexity_report(req: s.ComplexityRequest) -> s.ComplexityPayload:
    return s.ComplexityPayload.from_report(complexity.report_for(req.k))


def bench(req: s.BenchRequest) -> s.BenchResponse:
    if req.full:
        reports = []
        for cid in req.cases:
            case = benchmark.get_case(cid)
            reports.extend(
                benchmark.sweep_configs(
                    case, req.method, draws=req.draws, seed=req.seed
                )[1]
            )
    else:
        reports = benchmark.bench_cases(
            req.cases, req.method, draws=req.draws, seed=req.seed, jobs=req.jobs
        )
    with tempfile.TemporaryDirectory() as tmp:
        path = f"{tmp}/report.csv"
        benchmark.write_report(reports, path)
        with open(path) as fh:
            text = fh.read()
    return s.BenchResponse(
        reports=[s.ReportRowPayload.from_report(r) for r in reports], csv=text
    )


def catalog() -> list[s.CatalogEntry]:
    return [
        s.CatalogEntry(
            id=c.id, label=c.label, omega=c.omega, bounds=list(c.bounds),
            grid_sizes=list(c.grid_sizes), klass=c.klass, available=c.available,
        )
        for c in benchmark.catalog()
    ]
