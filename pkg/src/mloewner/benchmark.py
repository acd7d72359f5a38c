"""Benchmark catalog and the sweep/RMSE evaluation pipeline.

Fifty test functions of polynomial, rational, and irrational nature,
each with its variable bounds and dense grid sizes.  A handful of
catalog slots reference special functions whose closed forms are not
carried here; they are marked unavailable and accept a user-registered
formula.  Evaluation of a case builds the tensor, fits a surrogate,
and scores it with a root-mean-square error over seeded uniform draws.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .adaptive import AdaptiveConfig, fit_adaptive
from .direct import FitConfig, fit_direct
from .errors import CaseUnavailable, InvalidInput, MLoewnerError, PoleEncountered, SweepExhausted
from .grid import GridAxis, GridTensor, linspace_axis, sample_grid
from .loewner import NullMethod
from .models import BarycentricModel, eval_barycentric, eval_barycentric_batch
from .rng import SplitMix64, derive_case_seed

POLYNOMIAL = "polynomial"
RATIONAL = "rational"
IRRATIONAL = "irrational"

# Order-detection thresholds swept by the direct method.
DEFAULT_TOL_ORD_GRID = (
    0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14,
)
DEFAULT_ADAPTIVE_TOL_GRID = (1e-15,)

MAX_POLE_RETRIES = 10
_REDRAW_SALT = 0xD1B54A32D192ED03


@dataclass(frozen=True)
class BenchmarkCase:
    id: int
    label: str
    formula: Callable | None
    omega: int
    bounds: tuple[tuple[float, float], ...]
    grid_sizes: tuple[int, ...]
    klass: str
    available: bool

    def axes(self) -> list[GridAxis]:
        return [
            linspace_axis(f"x{l + 1}", lo, hi, n)
            for l, ((lo, hi), n) in enumerate(zip(self.bounds, self.grid_sizes))
        ]

    def tensor(self) -> GridTensor:
        if not self.available:
            raise CaseUnavailable(f"case {self.id} has no formula registered")
        return sample_grid(self.formula, self.axes())


@dataclass(frozen=True)
class EvalReport:
    """One fitted configuration scored on one case."""

    case_id: int
    klass: str
    method: str
    config: str
    rmse: float
    model_scalars: int
    fit_seconds: float
    status: str
    pole_redraws: int = 0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _sinc(x):
    return np.sin(x) / x


def _f1(x1, x2):
    return np.maximum(x1, 0.0) + x2 / 100.0


def _f28(x1, x2):
    return (
        (x1 / (x1 + 1)) ** 4
        * (1 + np.exp(-(x2**2)))
        * (1 + x2 * np.cos(x2) * np.exp(-x1 * x2 / (x1 + 1)))
    )


def _f29(x1, x2):
    return np.minimum(10 * np.abs(x1), 1.0) * np.sign(x1) + x1 * x2**3 / 10.0


def _f47(x1, x2, x3, x4, x5):
    return (1 + 2 * x1) * (-2 + x2) * (-x3) * (3 + x4) * (2 - 3 * x5) + (
        -1 + x1
    ) * (2 * x2) * (1 + 3 * x3) * (-x4) * (1 - x5)


_B = lambda lo, hi: (float(lo), float(hi))  # noqa: E731

# id: (label, formula, omega, bounds, grid sizes, klass)
_CATALOG: dict[int, tuple] = {
    1: ("relu(x1) + x2/100", _f1, 2, [_B(-1, 1), _B(-1, -1e-10)], [40, 40], IRRATIONAL),
    2: ("exp(sin(x1) + x2^2)", lambda x1, x2: np.exp(np.sin(x1) + x2**2), 2,
        [_B(-1, 1)] * 2, [40, 40], IRRATIONAL),
    3: ("x1*x2", lambda x1, x2: x1 * x2, 2, [_B(-1, 1)] * 2, [40, 40], POLYNOMIAL),
    4: ("mean of sin(pi*x/2)^2", lambda x1, x2, x3: (
            np.sin(np.pi * x1 / 2) ** 2 + np.sin(np.pi * x2 / 2) ** 2
            + np.sin(np.pi * x3 / 2) ** 2) / 3.0,
        3, [_B(-1, 1)] * 3, [40] * 3, IRRATIONAL),
    5: ("exp((sin(pi(x1^2+x2^2)) + sin(pi(x3^2+x4^2)))/2)",
        lambda x1, x2, x3, x4: np.exp(
            0.5 * (np.sin(np.pi * (x1**2 + x2**2)) + np.sin(np.pi * (x3**2 + x4**2)))),
        4, [_B(-1, 1)] * 4, [40] * 4, IRRATIONAL),
    6: ("exp(x1*x2)/((x1^2-1.44)(x2^2-1.44))",
        lambda x1, x2: np.exp(x1 * x2) / ((x1**2 - 1.44) * (x2**2 - 1.44)),
        2, [_B(-1, 1)] * 2, [40, 40], IRRATIONAL),
    7: ("log(2.25 - x1^2 - x2^2)",
        lambda x1, x2: np.log(2.25 - x1**2 - x2**2),
        2, [_B(-1, 1)] * 2, [40, 40], IRRATIONAL),
    8: ("tanh(4(x1 - x2))", lambda x1, x2: np.tanh(4 * (x1 - x2)), 2,
        [_B(-1, 1)] * 2, [74, 74], IRRATIONAL),
    9: ("exp(-(x1^2+x2^2)/1000)",
        lambda x1, x2: np.exp(-(x1**2 + x2**2) / 1000.0),
        2, [_B(-1, 1)] * 2, [40, 40], IRRATIONAL),
    10: ("|x1 - x2|^3", lambda x1, x2: np.abs(x1 - x2) ** 3, 2,
         [_B(-1, 1)] * 2, [82, 82], IRRATIONAL),
    11: ("(x1 + x2^3)/(x1*x2^2 + 2)",
         lambda x1, x2: (x1 + x2**3) / (x1 * x2**2 + 2),
         2, [_B(1e-10, 1)] * 2, [40, 40], RATIONAL),
    12: ("(x1^2+x2^2+x1-x2-1)/((x1-1.1)(x2-1.1))",
         lambda x1, x2: (x1**2 + x2**2 + x1 - x2 - 1) / ((x1 - 1.1) * (x2 - 1.1)),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    13: ("(x1^4+x2^4+x1^2x2^2+x1x2)/((x1-1.1)(x2-1.1))",
         lambda x1, x2: (x1**4 + x2**4 + x1**2 * x2**2 + x1 * x2)
         / ((x1 - 1.1) * (x2 - 1.1)),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    14: ("(x1^2+x2^2+x1-x2+1)/((x3-1.5)(x4-1.5))",
         lambda x1, x2, x3, x4: (x1**2 + x2**2 + x1 - x2 + 1)
         / ((x3 - 1.5) * (x4 - 1.5)),
         4, [_B(-1, 1)] * 4, [20] * 4, RATIONAL),
    15: ("(x1^2+x2^2+x1-x2-1)/(x1^3+x2^3+4)",
         lambda x1, x2: (x1**2 + x2**2 + x1 - x2 - 1) / (x1**3 + x2**3 + 4),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    16: ("(x1^3+x2^3)/(x1^2+x2^2+3)",
         lambda x1, x2: (x1**3 + x2**3) / (x1**2 + x2**2 + 3),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    17: ("(x1^4+x2^4+x1^2x2^2+x1x2)/(x1^2x2^2-2x1^2-2x2^2+4)",
         lambda x1, x2: (x1**4 + x2**4 + x1**2 * x2**2 + x1 * x2)
         / (x1**2 * x2**2 - 2 * x1**2 - 2 * x2**2 + 4),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    18: ("(x1^3+x2^3)/(x1^2x2^2-2x1^2-2x2^2+4)",
         lambda x1, x2: (x1**3 + x2**3)
         / (x1**2 * x2**2 - 2 * x1**2 - 2 * x2**2 + 4),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    19: ("(x1^4+x2^4+x1^2x2^2+x1x2)/(x1^3+x2^3+4)",
         lambda x1, x2: (x1**4 + x2**4 + x1**2 * x2**2 + x1 * x2)
         / (x1**3 + x2**3 + 4),
         2, [_B(-1, 1)] * 2, [40, 40], RATIONAL),
    20: ("Breit-Wigner resonance", None, 3,
         [_B(80, 100), _B(5, 10), _B(90, 93)], [40] * 3, IRRATIONAL),
    21: ("sum(atan(xi)) / (x1^2x2^2 - x1^2 - x2^2 + 1)",
         lambda x1, x2, x3, x4: (
             np.arctan(x1) + np.arctan(x2) + np.arctan(x3) + np.arctan(x4))
         / (x1**2 * x2**2 - x1**2 - x2**2 + 1),
         4, [_B(-0.95, 0.95)] * 4, [20] * 4, IRRATIONAL),
    22: ("exp(x1x2x3x4)/(x1^2+x2^2-x3x4+3)",
         lambda x1, x2, x3, x4: np.exp(x1 * x2 * x3 * x4)
         / (x1**2 + x2**2 - x3 * x4 + 3),
         4, [_B(-1, 1)] * 4, [20] * 4, IRRATIONAL),
    23: ("10 * prod(sinc(xi))",
         lambda x1, x2, x3, x4: 10 * _sinc(x1) * _sinc(x2) * _sinc(x3) * _sinc(x4),
         4, [_B(1e-6, 4 * math.pi)] * 4, [22] * 4, IRRATIONAL),
    24: ("10 * sinc(x1) * sinc(x2)",
         lambda x1, x2: 10 * _sinc(x1) * _sinc(x2),
         2, [_B(1e-6, 4 * math.pi)] * 2, [42, 42], IRRATIONAL),
    25: ("x1^2 + x2^2 + x1x2 - x2 + 1",
         lambda x1, x2: x1**2 + x2**2 + x1 * x2 - x2 + 1,
         2, [_B(-1, 1)] * 2, [40, 40], POLYNOMIAL),
    26: ("(x1+x2+x3)/(6+cos x1+cos x2+cos x3)",
         lambda x1, x2, x3: (x1 + x2 + x3)
         / (6 + np.cos(x1) + np.cos(x2) + np.cos(x3)),
         3, [_B(-10, 10)] * 3, [60] * 3, IRRATIONAL),
    27: ("(sum xi)/(10 + sum cos xi)",
         lambda x1, x2, x3, x4, x5: (x1 + x2 + x3 + x4 + x5)
         / (10 + np.cos(x1) + np.cos(x2) + np.cos(x3) + np.cos(x4) + np.cos(x5)),
         5, [_B(-4, 4)] * 5, [26] * 5, IRRATIONAL),
    28: ("sigmoidal product", _f28, 2, [_B(1e-10, 10)] * 2, [62, 62], IRRATIONAL),
    29: ("clipped sign + x1*x2^3/10", _f29, 2, [_B(-1, 1)] * 2, [40, 40], IRRATIONAL),
    30: ("Borehole water flow", None, 8,
         [_B(0.05, 0.15), _B(100, 50000), _B(63070, 115600), _B(990, 1110),
          _B(63.1, 116), _B(700, 820), _B(1120, 1680), _B(9855, 12045)],
         [8] * 8, IRRATIONAL),
    31: ("x1^2 x2^3 x3 x4 - x5^2 + x6",
         lambda x1, x2, x3, x4, x5, x6: x1**2 * x2**3 * x3 * x4 - x5**2 + x6,
         6, [_B(-2, 2)] * 6, [16] * 6, POLYNOMIAL),
    32: ("atan(x1) + x2^3", lambda x1, x2: np.arctan(x1) + x2**3, 2,
         [_B(-2, 2)] * 2, [40, 40], IRRATIONAL),
    33: ("(x1+x2)/(cos^2 x1 + cos x2 + 3)",
         lambda x1, x2: (x1 + x2) / (np.cos(x1) ** 2 + np.cos(x2) + 3),
         2, [_B(-10, 10)] * 2, [60, 60], IRRATIONAL),
    34: ("Riemann zeta, real part", None, 2,
         [_B(0.45, 0.55), _B(1, 50)], [400, 400], IRRATIONAL),
    35: ("Riemann zeta, imaginary part", None, 2,
         [_B(0.45, 0.55), _B(1, 50)], [400, 400], IRRATIONAL),
    36: ("x2/(3 + x1x2/3 - x3^2)",
         lambda x1, x2, x3: x2 / (3 + x2 * x1 / 3 - x3**2),
         3, [_B(0.1, 1)] * 3, [20] * 3, RATIONAL),
    37: ("x1 x4^3 + sin(2 x2) x3",
         lambda x1, x2, x3, x4: x1 * x4**3 + np.sin(2 * x2) * x3,
         4, [_B(1e-3, 1)] * 4, [20] * 4, IRRATIONAL),
    38: ("(x1^9x2^7 + x1^3 + 5x3^2)/(5x1^4 + 4x1^2 + x3x2^3 + 1)",
         lambda x1, x2, x3: (x1**9 * x2**7 + x1**3 + 5 * x3**2)
         / (5 * x1**4 + 4 * x1**2 + x3 * x2**3 + 1),
         3, [_B(-1.1, 1.1)] * 3, [60] * 3, RATIONAL),
    39: ("(x3 + x1^4)/(x1^3 + x2^2 + 1)",
         lambda x1, x2, x3: (x3 + x1**4) / (x1**3 + x2**2 + 1),
         3, [_B(0.1, 10)] * 3, [40] * 3, RATIONAL),
    40: ("x3x1/(x1^2 + x2 + x3^2 + 1) + x4^3",
         lambda x1, x2, x3, x4: x3 * x1 / (x1**2 + x2 + x3**2 + 1) + x4**3,
         4, [_B(1, 4)] * 4, [40] * 4, RATIONAL),
    41: ("(x5^3x3x1 + x3^2)/(x1^3 + x2x3 + x4)",
         lambda x1, x2, x3, x4, x5: (x5**3 * x3 * x1 + x3**2)
         / (x1**3 + x2 * x3 + x4),
         5, [_B(0.1, 1)] * 5, [10] * 5, RATIONAL),
    42: ("(x1 + x3 - sqrt(2)x6^2)/(x1^4 + x2x3 + x4^3 + x5^2 + x6)",
         lambda x1, x2, x3, x4, x5, x6: (x1 + x3 - math.sqrt(2) * x6**2)
         / (x1**4 + x2 * x3 + x4**3 + x5**2 + x6),
         6, [_B(0.1, 1)] * 6, [10] * 6, RATIONAL),
    43: ("(x3x2^3 + 1)/(x1^4 + x2^2x3 + x4^2 + x5 + x6^3 + x7)",
         lambda x1, x2, x3, x4, x5, x6, x7: (x3 * x2**3 + 1)
         / (x1**4 + x2**2 * x3 + x4**2 + x5 + x6**3 + x7),
         7, [_B(1, 10)] * 7, [10] * 7, RATIONAL),
    44: ("1/(x1^4 + x2^2x3 + x4^2 + x5 + x6 + x7 + x8)",
         lambda x1, x2, x3, x4, x5, x6, x7, x8: 1.0
         / (x1**4 + x2**2 * x3 + x4**2 + x5 + x6 + x7 + x8),
         8, [_B(0.1, 20)] * 8, [10] * 8, RATIONAL),
    45: ("1/(x1^2 + x2^2x3 + x4^2 + x5 + x6 + x7 + x8 + x9)",
         lambda x1, x2, x3, x4, x5, x6, x7, x8, x9: 1.0
         / (x1**2 + x2**2 * x3 + x4**2 + x5 + x6 + x7 + x8 + x9),
         9, [_B(1, 5)] * 9, [6] * 9, RATIONAL),
    46: ("1/(x1 + x1^2x2x3 + x4 + x5 + x6 + x7x8 + x9^2 + x10)",
         lambda x1, x2, x3, x4, x5, x6, x7, x8, x9, x10: 1.0
         / (x1 + x1**2 * x2 * x3 + x4 + x5 + x6 + x7 * x8 + x9**2 + x10),
         10, [_B(1, 5)] * 10, [6] * 10, RATIONAL),
    47: ("two five-factor products", _f47, 5, [_B(-2, 2)] * 5, [12] * 5, POLYNOMIAL),
    48: ("x1x2 + x1x3 + x2x3",
         lambda x1, x2, x3: x1 * x2 + x1 * x3 + x2 * x3,
         3, [_B(-0.5, 1)] * 3, [12] * 3, POLYNOMIAL),
    49: ("Hankel H0, real part", None, 2, [_B(1, 10), _B(0.1, 1)], [80, 80], IRRATIONAL),
    50: ("Hankel H0, imaginary part", None, 2, [_B(1, 10), _B(0.1, 1)], [80, 80], IRRATIONAL),
}

UNAVAILABLE_CASES = frozenset(
    cid for cid, row in _CATALOG.items() if row[1] is None
)

_PLUGINS: dict[int, Callable] = {}


def register_formula(case_id: int, formula: Callable) -> None:
    """Plug a formula into an unavailable catalog slot."""
    if case_id not in _CATALOG:
        raise InvalidInput(f"no catalog case {case_id}")
    _PLUGINS[case_id] = formula


def catalog() -> list[BenchmarkCase]:
    """All fifty cases; slots without a formula are marked unavailable."""
    out = []
    for cid, (label, formula, omega, bounds, sizes, klass) in sorted(_CATALOG.items()):
        formula = _PLUGINS.get(cid, formula)
        out.append(
            BenchmarkCase(
                cid, label, formula, omega, tuple(bounds), tuple(sizes), klass,
                available=formula is not None,
            )
        )
    return out


def get_case(case_id: int) -> BenchmarkCase:
    for case in catalog():
        if case.id == case_id:
            return case
    raise InvalidInput(f"no catalog case {case_id}")


def _draw_points(bounds, draws: int, seed: int) -> np.ndarray:
    rng = SplitMix64(seed)
    pts = np.empty((draws, len(bounds)))
    for i in range(draws):
        for l, (lo, hi) in enumerate(bounds):
            pts[i, l] = rng.uniform(lo, hi)
    return pts


def _eval_truth(f, points: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(*points.T), dtype=float)
        if out.shape == (points.shape[0],):
            return out
    except Exception:
        pass
    return np.array([float(f(*x)) for x in points])


def _eval_surrogate(model, points: np.ndarray) -> np.ndarray:
    if isinstance(model, BarycentricModel):
        return eval_barycentric_batch(model, points)
    return np.array([float(model(*x)) for x in points])


def _eval_surrogate_one(model, x) -> float:
    if isinstance(model, BarycentricModel):
        return eval_barycentric(model, x)
    return float(model(*x))


def rmse(
    model,
    f: Callable,
    bounds: Sequence[tuple[float, float]],
    draws: int = 500,
    seed: int = 0,
) -> float:
    """Root-mean-square mismatch over seeded uniform draws.

    A draw that lands on a surrogate pole is replaced from a derived
    redraw stream, at most ten times.
    """
    value, _ = rmse_with_redraws(model, f, bounds, draws, seed)
    return value


def rmse_with_redraws(model, f, bounds, draws=500, seed=0) -> tuple[float, int]:
    if draws < 1:
        raise InvalidInput("need at least one draw")
    points = _draw_points(bounds, draws, seed)
    redraws = 0
    try:
        approx = _eval_surrogate(model, points)
    except PoleEncountered:
        redraw_rng = SplitMix64(seed ^ _REDRAW_SALT)
        approx = np.empty(draws)
        for i in range(draws):
            x = points[i]
            for attempt in range(MAX_POLE_RETRIES + 1):
                try:
                    approx[i] = _eval_surrogate_one(model, x)
                    break
                except PoleEncountered:
                    if attempt == MAX_POLE_RETRIES:
                        raise
                    redraws += 1
                    x = np.array([redraw_rng.uniform(lo, hi) for lo, hi in bounds])
            points[i] = x
    truth = _eval_truth(f, points)
    return float(np.sqrt(np.mean((approx - truth) ** 2))), redraws


def _config_label(method: str, config) -> str:
    if method == "direct":
        return (
            f"tol_ord={config.tol_ord:g},"
            f"null_method={config.null_method.value},tol_k={config.tol_k:g}"
        )
    return f"tol={config.tol:g},null_method={config.null_method.value}"


def run_case(
    case: BenchmarkCase,
    method: str = "direct",
    config=None,
    draws: int = 500,
    seed: int = 0,
    tensor: GridTensor | None = None,
) -> EvalReport:
    """Build the case tensor, fit one configuration, and score it.

    Wall time is measured around the fit only.  Fit failures produce a
    ``not_converged`` report carrying the error, as does an adaptive run
    that stops on iteration or pool limits.
    """
    if not case.available:
        raise CaseUnavailable(f"case {case.id} has no formula registered")
    if method not in ("direct", "adaptive"):
        raise InvalidInput(f"unknown method {method!r}")
    if config is None:
        config = FitConfig() if method == "direct" else AdaptiveConfig()
    tensor = tensor if tensor is not None else case.tensor()
    label = _config_label(method, config)
    case_seed = derive_case_seed(seed, case.id)

    status, error, model = "ok", None, None
    t0 = time.perf_counter()
    try:
        if method == "direct":
            model, _ = fit_direct(tensor, config=config)
        else:
            model, trace = fit_adaptive(tensor, config=config)
            if not trace.converged:
                status = "not_converged"
                error = trace.status
    except MLoewnerError as exc:
        status, error = "not_converged", f"{type(exc).__name__}: {exc}"
    fit_seconds = time.perf_counter() - t0

    if model is None:
        return EvalReport(case.id, case.klass, method, label, float("nan"), 0,
                          fit_seconds, status, 0, error)
    value, redraws = rmse_with_redraws(model, case.formula, case.bounds, draws, case_seed)
    return EvalReport(case.id, case.klass, method, label, value,
                      model.scalar_count(), fit_seconds, status, redraws, error)


def default_configs(method: str = "direct") -> list:
    """The swept parameter grid: thresholds times null-space methods."""
    methods = [NullMethod.SVD, NullMethod.QR, NullMethod.SOLVE]
    if method == "direct":
        return [
            FitConfig(tol_ord=t, null_method=nm)
            for t in DEFAULT_TOL_ORD_GRID
            for nm in methods
        ]
    return [
        AdaptiveConfig(tol=t, null_method=nm)
        for t in DEFAULT_ADAPTIVE_TOL_GRID
        for nm in methods
    ]


def sweep_configs(
    case: BenchmarkCase,
    method: str = "direct",
    configs: Sequence | None = None,
    draws: int = 500,
    seed: int = 0,
) -> tuple[EvalReport, list[EvalReport]]:
    """Run every configuration on one case and keep the best.

    Best is the lowest RMSE among converged reports; ties break on the
    smaller model, then on the configuration label.  The tensor is
    sampled once and the draw points are shared by every configuration.
    """
    configs = list(configs) if configs is not None else default_configs(method)
    if not configs:
        raise InvalidInput("empty configuration grid")
    tensor = case.tensor()
    reports = [
        run_case(case, method, cfg, draws=draws, seed=seed, tensor=tensor)
        for cfg in configs
    ]
    ok = [r for r in reports if r.ok and np.isfinite(r.rmse)]
    if not ok:
        raise SweepExhausted(f"all {len(configs)} configurations failed on case {case.id}")
    best = min(ok, key=lambda r: (r.rmse, r.model_scalars, r.config))
    return best, reports


def bench_cases(
    case_ids: Sequence[int],
    method: str = "direct",
    draws: int = 500,
    seed: int = 0,
    jobs: int = 1,
    configs: Sequence | None = None,
) -> list[EvalReport]:
    """Best-of-sweep report for each case, optionally in parallel."""
    cases = [get_case(cid) for cid in case_ids]
    for case in cases:
        if not case.available:
            raise CaseUnavailable(f"case {case.id} has no formula registered")

    def best_of(case):
        return sweep_configs(case, method, configs, draws=draws, seed=seed)[0]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(best_of, cases))
    else:
        reports = [best_of(c) for c in cases]
    return sorted(reports, key=lambda r: r.case_id)


_HEADER = ["case_id", "klass", "method", "config", "dim", "cpu_s", "rmse", "status"]


def write_report(reports: Sequence[EvalReport], path, summary_path=None) -> None:
    """CSV rows per report plus a per-klass min/median summary file."""
    reports = sorted(reports, key=lambda r: (r.case_id, r.method, r.config))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for r in reports:
            writer.writerow(
                [r.case_id, r.klass, r.method, r.config, r.model_scalars,
                 repr(r.fit_seconds), repr(r.rmse), r.status]
            )
    if summary_path is None:
        summary_path = str(path) + ".summary.csv"
    groups: dict[tuple[str, str], list[float]] = {}
    for r in reports:
        if r.ok and np.isfinite(r.rmse):
            groups.setdefault((r.klass, r.method), []).append(r.rmse)
    with open(summary_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["klass", "method", "count", "min_rmse", "median_rmse"])
        for (klass, method), values in sorted(groups.items()):
            writer.writerow(
                [klass, method, len(values), repr(min(values)),
                 repr(float(np.median(values)))]
            )


def read_report(path) -> list[EvalReport]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(
                EvalReport(
                    int(row["case_id"]), row["klass"], row["method"], row["config"],
                    float(row["rmse"]), int(row["dim"]), float(row["cpu_s"]),
                    row["status"],
                )
            )
    return out
