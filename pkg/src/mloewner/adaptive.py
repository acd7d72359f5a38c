"""Adaptive fit: greedy support growth driven by the weighted residual.

Starting from one support point per variable, each iteration fits the
current support, sweeps the whole grid for the largest weighted
mismatch, and extends every variable whose coordinate at that node is
not yet a column point.  Row points are re-partitioned from the
complement after each growth so the sides stay disjoint.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .direct import recursive_nullspace
from .errors import InvalidInput, PoleEncountered
from .grid import GridTensor, complement_rows, gather_values, split_support
from .loewner import NullMethod
from .models import BarycentricModel, eval_barycentric, eval_barycentric_batch

CONVERGED = "converged"
MAX_ITERS = "max_iters"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class AdaptiveConfig:
    """Relative mismatch tolerance and growth limits."""

    tol: float = 1e-15
    null_method: NullMethod = NullMethod.SVD
    max_iters: int = 100
    seed_k: int = 1

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidInput("tol must be > 0")
        if self.max_iters < 1:
            raise InvalidInput("max_iters must be >= 1")
        if self.seed_k < 1:
            raise InvalidInput("seed_k must be >= 1")
        object.__setattr__(self, "null_method", NullMethod.from_name(self.null_method))


@dataclass(frozen=True)
class AdaptiveStep:
    iteration: int
    added_variables: tuple[int, ...]
    node: tuple[float, ...] | None
    max_residual: float
    k: tuple[int, ...]


@dataclass
class AdaptiveTrace:
    steps: list[AdaptiveStep] = field(default_factory=list)
    status: str = MAX_ITERS

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["iter", "variables_added", "point", "max_residual", "k_vector"])
        for s in self.steps:
            writer.writerow(
                [
                    s.iteration,
                    ";".join(str(v + 1) for v in s.added_variables),
                    "" if s.node is None else ",".join(repr(x) for x in s.node),
                    repr(s.max_residual),
                    ",".join(str(x) for x in s.k),
                ]
            )
        return buf.getvalue()


def _grid_nodes(tensor: GridTensor) -> np.ndarray:
    mesh = np.meshgrid(*(a.points for a in tensor.axes), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _residual_sweep(model, nodes, truth, scale) -> np.ndarray:
    try:
        approx = eval_barycentric_batch(model, nodes)
    except PoleEncountered:
        approx = np.empty(len(nodes))
        for i, x in enumerate(nodes):
            try:
                approx[i] = eval_barycentric(model, x)
            except PoleEncountered:
                approx[i] = np.inf
    return np.abs(approx - truth) / scale


def fit_adaptive(
    tensor: GridTensor, config: AdaptiveConfig | None = None
) -> tuple[BarycentricModel, AdaptiveTrace]:
    """Grow support greedily until the weighted residual meets ``tol``.

    The residual is ``|G - H| / max|H|`` over all grid nodes except the
    full support combinations (absolute error when the tensor is all
    zero); ties at the arg-max break to the smallest flat index.
    Non-convergence is reported in the trace status, never raised.
    """
    config = config or AdaptiveConfig()
    if any(len(a) < 2 for a in tensor.axes):
        raise InvalidInput("every axis needs at least two points")
    if not np.isfinite(tensor.values).all():
        raise InvalidInput("tensor contains non-finite values")

    axes = tensor.axes
    lambdas = [
        split_support(axis, min(config.seed_k, len(axis) // 2), 1)[0]
        for axis in axes
    ]
    nodes = _grid_nodes(tensor)
    truth = tensor.values
    peak = float(np.abs(truth).max())
    scale = peak if peak > 0 else 1.0

    trace = AdaptiveTrace()
    model = None
    for iteration in range(1, config.max_iters + 1):
        mus = [
            complement_rows(axis.points, lam, lam.size)
            for axis, lam in zip(axes, lambdas)
        ]
        weights, factors = recursive_nullspace(
            tensor, lambdas, mus, null_method=config.null_method
        )
        part = gather_values(tensor, lambdas, mus)
        model = BarycentricModel(tuple(lambdas), weights, part.w, factors)

        residual = _residual_sweep(model, nodes, truth, scale)
        support = np.ones(len(nodes), dtype=bool)
        for l, lam in enumerate(lambdas):
            support &= np.isin(nodes[:, l], lam)
        residual = residual.copy()
        residual[support] = -1.0
        flat = int(np.argmax(residual))
        rmax = float(residual[flat])
        ks = tuple(lam.size for lam in lambdas)

        if rmax <= config.tol:
            trace.steps.append(AdaptiveStep(iteration, (), None, rmax, ks))
            trace.status = CONVERGED
            return model, trace

        node = tuple(float(x) for x in nodes[flat])
        added = []
        for l, axis in enumerate(axes):
            coord = node[l]
            if coord in set(lambdas[l].tolist()):
                continue
            if 2 * (lambdas[l].size + 1) > len(axis):
                continue  # no room left for disjoint rows
            lambdas[l] = np.append(lambdas[l], coord)
            added.append(l)
        ks = tuple(lam.size for lam in lambdas)
        trace.steps.append(AdaptiveStep(iteration, tuple(added), node, rmax, ks))
        if not added:
            trace.status = EXHAUSTED
            return model, trace

    trace.status = MAX_ITERS
    return model, trace
