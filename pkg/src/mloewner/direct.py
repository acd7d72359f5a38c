"""Direct fit: order detection, support selection, recursive null space.

The weight vector of the full omega-D Loewner matrix is assembled from
one-variable solves only.  Level l freezes the trailing variables at
their last column points and the leading variables at every combination
of their column points; each frozen combination contributes one
``k_l x k_l`` solve.  The per-variable factors multiply into the full
weight vector, so the big matrix is never formed and the largest object
held is ``max_l k_l`` square.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import complexity
from .errors import DegenerateSlice, InvalidInput, OverPrunedModel, PartitionError
from .grid import (
    GridAxis,
    GridTensor,
    column_capacity,
    complement_rows,
    gather_values,
    split_support,
)
from .loewner import NullMethod, build_loewner_1d, estimate_order, null_vector, prune_weights
from .models import BarycentricModel, compose_factors
from .rng import SplitMix64

_ORDER_SLICE_SEED = 0x51C3D


@dataclass
class FlopCounter:
    """Counts one-variable solves at the k^3 convention."""

    flops: int = 0
    solves: int = 0

    def add(self, k: int) -> None:
        self.flops += k**3
        self.solves += 1


@dataclass(frozen=True)
class FitConfig:
    """Tuning knobs of the direct fit.

    ``tol_ord`` is the normalized-singular-value threshold for order
    detection (0 disables it, in which case explicit ``k`` is required).
    ``tol_k`` prunes small weights after the fit (-1 keeps everything).
    ``order_slices`` > 1 re-runs detection on extra random frozen slices
    and keeps the largest order seen.
    """

    tol_ord: float = 1e-6
    null_method: NullMethod = NullMethod.SVD
    tol_k: float = -1.0
    max_k: int | None = None
    k: tuple[int, ...] | None = None
    order_slices: int = 1
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.tol_ord != 0 and not 0.0 < self.tol_ord <= 1.0:
            raise InvalidInput(f"tol_ord must be 0 or in (0, 1], got {self.tol_ord}")
        if self.max_k is not None and self.max_k < 1:
            raise InvalidInput("max_k must be >= 1")
        if self.order_slices < 1:
            raise InvalidInput("order_slices must be >= 1")
        object.__setattr__(self, "null_method", NullMethod.from_name(self.null_method))
        if self.k is not None:
            object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(int(x) for x in self.permutation))


def _value_fn(source) -> Callable[[tuple], float]:
    if isinstance(source, GridTensor):
        return source.value_at
    return lambda coords: float(source(*coords))


def recursive_nullspace(
    source,
    lambdas: Sequence[np.ndarray],
    mus: Sequence[np.ndarray] | None = None,
    *,
    null_method: NullMethod = NullMethod.SVD,
    permutation: Sequence[int] | None = None,
    axes: Sequence[GridAxis] | None = None,
    counter: FlopCounter | None = None,
) -> tuple[np.ndarray, tuple[np.ndarray, ...] | None]:
    """Weight vector of the omega-D Loewner null space, without building it.

    ``source`` is the sampled function (callable) or a grid tensor.
    Row points default to the canonical split of ``axes`` (complement
    rule when the given columns collide with it).  Returns the composed
    weights and the per-variable factor tensors; with a non-identity
    ``permutation`` the recursion runs in that variable order and only
    the re-ordered weights are returned (factors are tied to the
    recursion order, so they are dropped).
    """
    lambdas = [np.asarray(x, dtype=float) for x in lambdas]
    omega = len(lambdas)
    if isinstance(source, GridTensor) and axes is None:
        axes = source.axes
    if mus is None:
        if axes is None:
            raise InvalidInput("need explicit row points or axes to derive them")
        mus = []
        for axis, lam in zip(axes, lambdas):
            try:
                rows = split_support(axis, lam.size, lam.size)[1]
                if set(rows.tolist()) & set(lam.tolist()):
                    raise PartitionError("parity rows collide with given columns")
            except PartitionError:
                rows = complement_rows(axis.points, lam, lam.size)
            mus.append(rows)
    mus = [np.asarray(x, dtype=float) for x in mus]
    if len(mus) != omega:
        raise InvalidInput("row point count must match column point count")

    perm = tuple(range(omega)) if permutation is None else tuple(permutation)
    if sorted(perm) != list(range(omega)):
        raise InvalidInput(f"bad permutation {perm}")
    identity = perm == tuple(range(omega))

    value = _value_fn(source)
    plams = [lambdas[p] for p in perm]
    pmus = [mus[p] for p in perm]
    ks = [x.size for x in plams]
    method = NullMethod.from_name(null_method)

    factors: list[np.ndarray] = []
    for l in range(omega):
        prefix_count = math.prod(ks[:l])
        cols = np.empty((ks[l], prefix_count))
        suffix = tuple(plams[m][-1] for m in range(l + 1, omega))
        for p, prefix in enumerate(itertools.product(*plams[:l])):
            def coords(x):
                full = [0.0] * omega
                for m, val in zip(perm[:l], prefix):
                    full[m] = val
                full[perm[l]] = x
                for m, val in zip(perm[l + 1 :], suffix):
                    full[m] = val
                return tuple(full)

            w = np.array([value(coords(x)) for x in plams[l]])
            v = np.array([value(coords(x)) for x in pmus[l]])
            if ks[l] > 1 and not w.any() and not v.any():
                frozen = dict(zip(perm[:l], prefix))
                frozen.update(zip(perm[l + 1 :], suffix))
                raise DegenerateSlice(
                    f"all-zero data in variable {perm[l] + 1} solve", frozen=frozen
                )
            cols[:, p] = null_vector(
                build_loewner_1d(plams[l], pmus[l], w, v), method
            )
            if counter is not None:
                counter.add(ks[l])
        factors.append(cols)

    weights = compose_factors(factors, ks)
    if identity:
        return weights, tuple(factors)
    inverse = np.argsort(perm)
    weights = weights.reshape(ks).transpose(inverse).reshape(-1)
    return weights, None


def _order_samples(source, axes, variable, frozen_idx):
    """Samples along one variable with the others frozen by axis index."""
    if isinstance(source, GridTensor):
        return np.asarray(source.line(variable, frozen_idx), dtype=float)
    coords = [axes[m].points[i] for m, i in zip(
        [m for m in range(len(axes)) if m != variable], frozen_idx
    )]
    out = np.empty(len(axes[variable]))
    for i, x in enumerate(axes[variable].points):
        full = list(coords)
        full.insert(variable, x)
        out[i] = source(*full)
    return out


def detect_orders(source, axes: Sequence[GridAxis], config: FitConfig) -> list[int]:
    """Per-variable orders from one-variable Loewner ranks.

    The default slice freezes every other variable at its first column
    point; extra random slices (column-pool points drawn from a fixed
    deterministic stream) can only raise the detected order.
    """
    omega = len(axes)
    rng = SplitMix64(_ORDER_SLICE_SEED)
    orders = []
    for l in range(omega):
        others = [m for m in range(omega) if m != l]
        frozen_sets = [[1] * len(others)]
        for _ in range(config.order_slices - 1):
            frozen_sets.append(
                [1 + 2 * (rng.next_u64() % column_capacity(axes[m])) for m in others]
            )
        d = 0
        for frozen in frozen_sets:
            samples = _order_samples(source, axes, l, frozen)
            d = max(d, estimate_order(samples, axes[l].points, config.tol_ord))
        orders.append(d)
    return orders


def fit_direct(
    source,
    axes: Sequence[GridAxis] | None = None,
    config: FitConfig | None = None,
) -> tuple[BarycentricModel, complexity.ComplexityReport]:
    """Fit a barycentric model to a tensor or function oracle.

    Orders are detected per variable (unless ``config.k`` pins them),
    support points split off the grid, and the weights computed by the
    recursive scheme; ``tol_k`` pruning runs last.  Returns the model
    together with the flop/storage account of the fitted support sizes.
    """
    config = config or FitConfig()
    if isinstance(source, GridTensor):
        axes = source.axes
    elif axes is None:
        raise InvalidInput("function sources need explicit axes")
    axes = tuple(axes)

    if config.k is not None:
        ks = list(config.k)
        if len(ks) != len(axes):
            raise InvalidInput("explicit k must list one count per variable")
    elif config.tol_ord == 0:
        raise InvalidInput("tol_ord = 0 disables detection; supply explicit k")
    else:
        orders = detect_orders(source, axes, config)
        cap = config.max_k if config.max_k is not None else max(len(a) for a in axes)
        ks = [
            min(d + 1, cap, column_capacity(axis))
            for d, axis in zip(orders, axes)
        ]

    splits = [split_support(axis, k, k) for axis, k in zip(axes, ks)]
    lambdas = [s[0] for s in splits]
    mus = [s[1] for s in splits]

    counter = FlopCounter()
    weights, factors = recursive_nullspace(
        source,
        lambdas,
        mus,
        null_method=config.null_method,
        permutation=config.permutation,
        axes=axes,
        counter=counter,
    )
    pruned = prune_weights(weights, config.tol_k)
    if not pruned.any():
        raise OverPrunedModel(f"tol_k = {config.tol_k} removed every weight")
    if factors is not None and not np.array_equal(pruned, weights):
        factors = None  # pruning breaks the exact factor composition
    part = gather_values(source, lambdas, mus)
    model = BarycentricModel(tuple(lambdas), pruned, part.w, factors)
    return model, complexity.report_for(ks)
