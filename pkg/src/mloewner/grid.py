"""Discretization axes, dense grid tensors, and support-point partitions.

A grid tensor stores samples of an omega-variate function on the
Cartesian product of per-variable axes.  Values are kept flat in
C order: the flat index of ``(j_1, ..., j_om)`` is
``((j_1 * N_2 + j_2) * N_3 + ...) * N_om + j_om``, i.e. the last
variable runs fastest.  Every downstream vector (weights, values,
monomial coefficients) follows the same ordering.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    GridLookupError,
    InvalidAxis,
    PartitionError,
    SamplingError,
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GridAxis:
    """One discretized variable: a name, bounds, and increasing points."""

    name: str
    lower: float
    upper: float
    points: np.ndarray

    def __post_init__(self):
        pts = _readonly(self.points)
        object.__setattr__(self, "points", pts)
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise InvalidAxis(f"axis {self.name!r}: non-finite bounds")
        if not self.lower < self.upper:
            raise InvalidAxis(f"axis {self.name!r}: lower must be < upper")
        if pts.size == 0:
            raise InvalidAxis(f"axis {self.name!r}: no points")
        if np.any(np.diff(pts) <= 0):
            raise InvalidAxis(f"axis {self.name!r}: points not strictly increasing")
        if pts[0] < self.lower or pts[-1] > self.upper:
            raise InvalidAxis(f"axis {self.name!r}: points outside bounds")

    def __len__(self) -> int:
        return int(self.points.size)

    def index_of(self, value: float) -> int:
        """Exact index of ``value`` among the points, else GridLookupError."""
        i = int(np.searchsorted(self.points, value))
        if i < len(self.points) and self.points[i] == value:
            return i
        raise GridLookupError(f"{value!r} is not a point of axis {self.name!r}")


@dataclass(frozen=True)
class GridTensor:
    """Dense samples of a function on the product grid of ``axes``."""

    axes: tuple[GridAxis, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        vals = _readonly(self.values).reshape(-1)
        object.__setattr__(self, "values", vals)
        n = math.prod(len(a) for a in self.axes)
        if vals.size != n:
            raise SamplingError(
                f"value count {vals.size} != grid size {n}", coords=None
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    @property
    def omega(self) -> int:
        return len(self.axes)

    def reshaped(self) -> np.ndarray:
        return self.values.reshape(self.shape)

    def value_at(self, coords: Sequence[float]) -> float:
        """Value at a grid node given by its coordinates (exact match)."""
        idx = tuple(a.index_of(c) for a, c in zip(self.axes, coords))
        return float(self.reshaped()[idx])

    def line(self, variable: int, frozen_indices: Sequence[int]) -> np.ndarray:
        """All samples along one variable with the others frozen by index."""
        sel: list = list(frozen_indices)
        sel.insert(variable, slice(None))
        return self.reshaped()[tuple(sel)]

    def to_json(self) -> str:
        doc = {
            "axes": [
                {"name": a.name, "points": a.points.tolist()} for a in self.axes
            ],
            "values": self.values.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "GridTensor":
        doc = json.loads(text)
        axes = []
        for spec in doc["axes"]:
            pts = np.asarray(spec["points"], dtype=float)
            if pts.size < 2:
                raise InvalidAxis(f"axis {spec.get('name')!r}: needs >= 2 points")
            axes.append(
                GridAxis(spec["name"], float(pts[0]), float(pts[-1]), pts)
            )
        values = np.asarray(doc["values"], dtype=float)
        return cls(tuple(axes), values)


@dataclass(frozen=True)
class SupportPartition:
    """Per-variable column/row support points with their sampled values.

    ``w`` holds the function on every combination of column points
    (flattened in grid order, shape ``k_1 x ... x k_om``); ``v`` holds
    the row combinations likewise.
    """

    lambdas: tuple[np.ndarray, ...]
    mus: tuple[np.ndarray, ...]
    w: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(_readonly(x) for x in self.lambdas))
        object.__setattr__(self, "mus", tuple(_readonly(x) for x in self.mus))
        object.__setattr__(self, "w", _readonly(self.w).reshape(-1))
        object.__setattr__(self, "v", _readonly(self.v).reshape(-1))
        if len(self.lambdas) != len(self.mus):
            raise PartitionError("lambda/mu variable counts differ")
        for lam, mu in zip(self.lambdas, self.mus):
            if lam.size < 1 or mu.size < 1:
                raise PartitionError("empty support set")
            if np.intersect1d(lam, mu).size:
                raise PartitionError("column and row points must be disjoint")
        if self.w.size != math.prod(self.k):
            raise PartitionError("w size does not match column counts")
        if self.v.size != math.prod(self.q):
            raise PartitionError("v size does not match row counts")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(int(x.size) for x in self.lambdas)

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(int(x.size) for x in self.mus)

    def w_tensor(self) -> np.ndarray:
        return self.w.reshape(self.k)


def linspace_axis(name: str, lower: float, upper: float, n: int) -> GridAxis:
    """Uniform axis with ``n`` points from ``lower`` to ``upper`` inclusive."""
    if n < 2:
        raise InvalidAxis(f"axis {name!r}: need n >= 2, got {n}")
    if not (np.isfinite(lower) and np.isfinite(upper)):
        raise InvalidAxis(f"axis {name!r}: non-finite bounds")
    if not lower < upper:
        raise InvalidAxis(f"axis {name!r}: lower must be < upper")
    return GridAxis(name, float(lower), float(upper), np.linspace(lower, upper, n))


def sample_grid(f: Callable[..., float], axes: Sequence[GridAxis]) -> GridTensor:
    """Evaluate ``f`` on the product grid of ``axes``.

    Tries one vectorized call on broadcast meshes first (cheap for numpy
    formulas); falls back to a scalar loop for non-vectorizable callables.
    Raises SamplingError, carrying the first offending node, if any value
    comes back non-finite.
    """
    axes = tuple(axes)
    mesh = np.meshgrid(*(a.points for a in axes), indexing="ij")
    shape = tuple(len(a) for a in axes)
    values = None
    try:
        out = np.asarray(f(*mesh), dtype=float)
        if out.shape == shape:
            values = out.reshape(-1)
    except Exception:
        values = None
    if values is None:
        values = np.empty(math.prod(shape))
        for i, xs in enumerate(itertools.product(*(a.points for a in axes))):
            values[i] = f(*xs)
    bad = ~np.isfinite(values)
    if bad.any():
        flat = int(np.flatnonzero(bad)[0])
        idx = np.unravel_index(flat, shape)
        coords = tuple(float(a.points[i]) for a, i in zip(axes, idx))
        raise SamplingError(f"non-finite sample at {coords}", coords=coords)
    return GridTensor(axes, values)


def _pool_pick(pool: np.ndarray, m: int) -> np.ndarray:
    """Canonical selection of ``m`` points from a pool.

    Picks the pool indices ``floor(linspace(0, len-1, m))``: the
    selection always starts at the pool's first element (for m >= 2),
    always ends at its last, and spreads evenly in between.  For m = 1
    only the pool's last element is taken.
    """
    if m == 1:
        return pool[-1:].copy()
    idx = np.floor(np.linspace(0, pool.size - 1, m)).astype(int)
    return pool[idx]


def split_support(axis: GridAxis, k: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Partition an axis into disjoint column and row support points.

    Odd-index grid points form the column pool and even-index points the
    row pool, so the two sides can never collide.  ``k`` columns and
    ``q`` rows are then drawn from their pools by the canonical spread
    rule of :func:`_pool_pick`.
    """
    if k < 1 or q < 1:
        raise PartitionError("support counts must be >= 1")
    pts = axis.points
    if k + q > pts.size:
        raise PartitionError(
            f"axis {axis.name!r}: k + q = {k + q} exceeds {pts.size} grid points"
        )
    col_pool = pts[1::2]
    row_pool = pts[0::2]
    if k > col_pool.size:
        raise PartitionError(
            f"axis {axis.name!r}: column pool has {col_pool.size} points, need k = {k}"
        )
    if q > row_pool.size:
        raise PartitionError(
            f"axis {axis.name!r}: row pool has {row_pool.size} points, need q = {q}"
        )
    return _pool_pick(col_pool, k), _pool_pick(row_pool, q)


def column_capacity(axis: GridAxis) -> int:
    """Largest k the odd-index column pool of ``axis`` can supply."""
    return int(axis.points[1::2].size)


def complement_rows(
    points: np.ndarray, lam: np.ndarray, q: int
) -> np.ndarray:
    """Row points disjoint from an arbitrary column set.

    Takes ``q`` points from ``points`` minus ``lam`` (in axis order) by
    the same spread rule as :func:`split_support`.  When ``lam`` is the
    canonical odd-pool selection this reproduces the even-pool rows.
    """
    pool = np.array([p for p in points if p not in set(lam.tolist())])
    if q > pool.size:
        raise PartitionError(f"only {pool.size} points left for {q} rows")
    return _pool_pick(pool, q)


def gather_values(
    source: Callable[..., float] | GridTensor,
    lambdas: Sequence[np.ndarray],
    mus: Sequence[np.ndarray],
) -> SupportPartition:
    """Sample ``source`` on every column and row support combination.

    ``source`` is either the function itself or a GridTensor whose nodes
    cover all requested combinations (looked up by exact coordinate).
    """
    lambdas = tuple(np.asarray(x, dtype=float) for x in lambdas)
    mus = tuple(np.asarray(x, dtype=float) for x in mus)
    if isinstance(source, GridTensor):
        value = source.value_at
    else:
        value = lambda coords: float(source(*coords))  # noqa: E731
    w = np.array([value(c) for c in itertools.product(*lambdas)])
    v = np.array([value(c) for c in itertools.product(*mus)])
    if not np.isfinite(w).all() or not np.isfinite(v).all():
        raise SamplingError("non-finite support value")
    return SupportPartition(lambdas, mus, w, v)
