"""Surrogate-model forms: barycentric, monomial, KST, and graph export.

The barycentric form is the fitting output; the monomial and KST forms
are exact conversions of it.  All three evaluate to the same rational
function.  Vectors indexed by support combinations follow the grid
ordering contract (last variable fastest).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSupport,
    FactorsUnavailable,
    InvalidInput,
    PoleEncountered,
)

# Relative half-width of the exact-hit window around a support point.
_HIT_RTOL = 1e-14


def factor_shapes(ks: Sequence[int]) -> list[tuple[int, int]]:
    """Shape of each per-variable factor: k_l columns per prefix combo."""
    return [(ks[l], math.prod(ks[:l])) for l in range(len(ks))]


def expand_factor(factor: np.ndarray, ks: Sequence[int], l: int) -> np.ndarray:
    """Spread a per-variable factor over all K support combinations.

    Column p of ``factor`` holds the weights for prefix combination p;
    the expanded vector is constant over the trailing-index block of
    each (prefix, j_l) pair.
    """
    trailing = math.prod(ks[l + 1 :])
    vec = np.ravel(factor, order="F")
    return np.repeat(vec, trailing)


def compose_factors(
    factors: Sequence[np.ndarray], ks: Sequence[int]
) -> np.ndarray:
    """Elementwise product of the expanded factors, last variable first.

    This is the reference composition: the fit stores exactly this
    product as its weight vector, so recomposition is bit-identical.
    """
    out = np.ones(math.prod(ks))
    for l in reversed(range(len(ks))):
        out = out * expand_factor(factors[l], ks, l)
    return out


@dataclass(frozen=True)
class BarycentricModel:
    """Rational interpolant in Lagrangian barycentric form.

    ``weights`` (length K = prod k_l) and ``values`` (the sampled tensor
    on the column support) define the function; ``factors`` optionally
    keeps the per-variable decoupling that produced the weights.
    """

    lambdas: tuple[np.ndarray, ...]
    weights: np.ndarray
    values: np.ndarray
    factors: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        lambdas = tuple(np.asarray(x, dtype=float) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float).reshape(-1))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).reshape(-1))
        big_k = math.prod(self.k)
        if self.weights.size != big_k or self.values.size != big_k:
            raise InvalidInput("weights/values length must equal prod(k_l)")
        if not np.any(self.weights):
            raise InvalidInput("weights are identically zero")
        if self.factors is not None:
            factors = tuple(np.asarray(f, dtype=float) for f in self.factors)
            object.__setattr__(self, "factors", factors)
            for f, shape in zip(factors, factor_shapes(self.k)):
                if f.reshape(f.shape[0], -1).shape != shape:
                    raise InvalidInput(f"factor shape {f.shape} != {shape}")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(int(x.size) for x in self.lambdas)

    @property
    def omega(self) -> int:
        return len(self.lambdas)

    def values_tensor(self) -> np.ndarray:
        return self.values.reshape(self.k)

    def scalar_count(self) -> int:
        """Stored scalars: weights, values, and support points."""
        return 2 * self.weights.size + sum(self.k)

    def to_json(self) -> str:
        doc = {
            "lambda": [x.tolist() for x in self.lambdas],
            "weights": self.weights.tolist(),
            "values": self.values.tolist(),
            "factors": None
            if self.factors is None
            else [f.reshape(-1).tolist() for f in self.factors],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "BarycentricModel":
        doc = json.loads(text)
        lambdas = tuple(np.asarray(x, dtype=float) for x in doc["lambda"])
        ks = tuple(x.size for x in lambdas)
        factors = None
        if doc.get("factors") is not None:
            factors = tuple(
                np.asarray(flat, dtype=float).reshape(shape)
                for flat, shape in zip(doc["factors"], factor_shapes(ks))
            )
        return cls(
            lambdas,
            np.asarray(doc["weights"], dtype=float),
            np.asarray(doc["values"], dtype=float),
            factors,
        )


@dataclass(frozen=True)
class MonomialModel:
    """Numerator/denominator coefficient tensors in the monomial basis.

    Index ``(j_1, ..., j_om)`` holds the coefficient of
    ``x_1^j_1 * ... * x_om^j_om`` (degrees ascending).  The printed
    convention of the worked examples lists highest degrees first;
    :meth:`descending` returns that layout.
    """

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "num", np.asarray(self.num, dtype=float))
        object.__setattr__(self, "den", np.asarray(self.den, dtype=float))
        if self.num.shape != self.den.shape:
            raise InvalidInput("numerator/denominator shapes differ")
        if not np.any(self.den):
            raise InvalidInput("denominator is identically zero")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.num.shape)

    def descending(self) -> tuple[np.ndarray, np.ndarray]:
        """Display layout: every axis reversed, constant term last."""
        return np.flip(self.num), np.flip(self.den)

    def to_json(self) -> str:
        return json.dumps(
            {
                "num": self.num.reshape(-1).tolist(),
                "den": self.den.reshape(-1).tolist(),
                "shape": list(self.shape),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MonomialModel":
        doc = json.loads(text)
        shape = tuple(doc["shape"])
        return cls(
            np.asarray(doc["num"], dtype=float).reshape(shape),
            np.asarray(doc["den"], dtype=float).reshape(shape),
        )


@dataclass(frozen=True)
class KstModel:
    """Superposition form: per-variable weight vectors over Lagrange poles.

    ``barys[l]`` has length K and is constant over trailing-index
    blocks; the elementwise product of all of them reproduces the
    barycentric weight vector up to scale.
    """

    lambdas: tuple[np.ndarray, ...]
    barys: tuple[np.ndarray, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "lambdas", tuple(np.asarray(x, dtype=float) for x in self.lambdas)
        )
        object.__setattr__(
            self, "barys", tuple(np.asarray(b, dtype=float).reshape(-1) for b in self.barys)
        )
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).reshape(-1))
        big_k = math.prod(self.k)
        for b in self.barys:
            if b.size != big_k:
                raise InvalidInput("bary vector length must equal prod(k_l)")
        if self.values.size != big_k:
            raise InvalidInput("values length must equal prod(k_l)")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(int(x.size) for x in self.lambdas)

    def pole_indices(self, l: int) -> np.ndarray:
        """For each flat support index, the index into lambdas[l]."""
        ks = self.k
        trailing = math.prod(ks[l + 1 :])
        reps = math.prod(ks[:l])
        return np.tile(np.repeat(np.arange(ks[l]), trailing), reps)


def _hit_index(x: float, lam: np.ndarray) -> int | None:
    """Index of the support point ``x`` matches within 1e-14, else None."""
    close = np.isclose(x, lam, rtol=_HIT_RTOL, atol=_HIT_RTOL)
    if not close.any():
        return None
    return int(np.argmin(np.abs(lam - x)))


def _recip_vectors(
    lambdas: Sequence[np.ndarray], x: Sequence[float]
) -> tuple[list[np.ndarray], list[int | None]]:
    """Per-variable reciprocal vectors with the exact-hit limit applied.

    A variable sitting on a support point contributes an indicator
    vector instead of reciprocals: the sums restrict to matching terms
    and the vanishing factor cancels between numerator and denominator.
    """
    recips, hits = [], []
    for lam, xl in zip(lambdas, x):
        j = _hit_index(float(xl), lam)
        hits.append(j)
        if j is None:
            recips.append(1.0 / (xl - lam))
        else:
            e = np.zeros(lam.size)
            e[j] = 1.0
            recips.append(e)
    return recips, hits


def _khatri_rao_row(vectors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1)
    for v in vectors:
        out = (out[:, None] * v[None, :]).reshape(-1)
    return out


def eval_barycentric(m: BarycentricModel, x: Sequence[float]) -> float:
    """Evaluate the barycentric form at one point.

    At a full support combination the stored tensor entry is returned
    directly; partial hits restrict both sums per the barycentric limit.
    """
    x = np.asarray(x, dtype=float)
    if not np.isfinite(x).all():
        raise InvalidInput("non-finite evaluation point")
    recips, hits = _recip_vectors(m.lambdas, x)
    if all(j is not None for j in hits):
        return float(m.values_tensor()[tuple(hits)])
    basis = _khatri_rao_row(recips)
    den = float(basis @ m.weights)
    if den == 0.0:
        raise PoleEncountered(f"denominator vanished at {tuple(x)}", x=x)
    num = float(basis @ (m.weights * m.values))
    return num / den


def eval_barycentric_batch(m: BarycentricModel, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at an (n, omega) array of points."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    hit_any = np.zeros(n, dtype=bool)
    recips = []
    for l, lam in enumerate(m.lambdas):
        diff = points[:, l, None] - lam[None, :]
        hit = np.isclose(points[:, l, None], lam[None, :], rtol=_HIT_RTOL, atol=_HIT_RTOL)
        hit_any |= hit.any(axis=1)
        with np.errstate(divide="ignore"):
            recips.append(1.0 / diff)
    out = np.empty(n)
    clean = ~hit_any
    if clean.any():
        basis = np.ones((int(clean.sum()), 1))
        for r in recips:
            basis = (basis[:, :, None] * r[clean][:, None, :]).reshape(clean.sum(), -1)
        den = basis @ m.weights
        if np.any(den == 0.0):
            bad = int(np.flatnonzero(clean)[np.flatnonzero(den == 0.0)[0]])
            raise PoleEncountered(
                f"denominator vanished at {tuple(points[bad])}", x=points[bad]
            )
        out[clean] = (basis @ (m.weights * m.values)) / den
    for i in np.flatnonzero(hit_any):
        out[i] = eval_barycentric(m, points[i])
    return out


def vandermonde_matrix(lam: Sequence[float]) -> np.ndarray:
    """Lagrange-to-monomial projection matrix for one variable.

    Column j holds the monomial coefficients of the node polynomial
    ``prod_{i != j} (x - lam_i)``, highest degree in the first row.
    Applied to ``c`` (or ``w * c``) it yields denominator (or
    numerator) coefficients of the barycentric form.
    """
    lam = np.asarray(lam, dtype=float)
    if np.unique(lam).size != lam.size:
        raise DegenerateSupport("support points must be distinct")
    k = lam.size
    out = np.empty((k, k))
    for j in range(k):
        out[:, j] = np.poly(np.delete(lam, j)) if k > 1 else [1.0]
    return out


def _mode_products(tensor: np.ndarray, matrices: Sequence[np.ndarray]) -> np.ndarray:
    for l, mat in enumerate(matrices):
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=([1], [l])), 0, l)
    return tensor


def to_monomial(m: BarycentricModel) -> MonomialModel:
    """Project the barycentric form onto the monomial basis.

    The Kronecker product of the per-variable Vandermonde matrices is
    applied as successive mode products, never materialized.  Both
    tensors are scaled by the denominator's largest coefficient, which
    pins the canonical form (an exactly recovered polynomial gets
    denominator one).
    """
    vands = [vandermonde_matrix(lam) for lam in m.lambdas]
    ks = m.k
    num_desc = _mode_products((m.weights * m.values).reshape(ks), vands)
    den_desc = _mode_products(m.weights.reshape(ks), vands)
    alpha = den_desc.flat[int(np.argmax(np.abs(den_desc)))]
    return MonomialModel(np.flip(num_desc / alpha), np.flip(den_desc / alpha))


def eval_monomial(m: MonomialModel, x: Sequence[float]) -> float:
    """Evaluate the monomial form by nested Horner passes per variable."""
    x = np.asarray(x, dtype=float)
    if not np.isfinite(x).all():
        raise InvalidInput("non-finite evaluation point")
    num, den = m.num, m.den
    for xl in x:
        num = np.polynomial.polynomial.polyval(xl, num)
        den = np.polynomial.polynomial.polyval(xl, den)
    if den == 0.0:
        raise PoleEncountered(f"denominator vanished at {tuple(x)}", x=x)
    return float(num) / float(den)


def eval_monomial_batch(m: MonomialModel, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    powers = [
        points[:, l, None] ** np.arange(k)[None, :] for l, k in enumerate(m.shape)
    ]
    basis = np.ones((points.shape[0], 1))
    for p in powers:
        basis = (basis[:, :, None] * p[:, None, :]).reshape(points.shape[0], -1)
    den = basis @ m.den.reshape(-1)
    if np.any(den == 0.0):
        bad = int(np.flatnonzero(den == 0.0)[0])
        raise PoleEncountered(f"denominator vanished at {tuple(points[bad])}", x=points[bad])
    return (basis @ m.num.reshape(-1)) / den


def to_kst(m: BarycentricModel) -> KstModel:
    """Superposition form from the stored per-variable factors."""
    if m.factors is None:
        raise FactorsUnavailable(
            "model carries no factor tensors; fit it with the recursive scheme"
        )
    barys = tuple(expand_factor(f, m.k, l) for l, f in enumerate(m.factors))
    return KstModel(m.lambdas, barys, m.values)


def eval_kst(m: KstModel, x: Sequence[float]) -> float:
    """Evaluate the KST form at one point (same hit rule as barycentric)."""
    x = np.asarray(x, dtype=float)
    if not np.isfinite(x).all():
        raise InvalidInput("non-finite evaluation point")
    recips, hits = _recip_vectors(m.lambdas, x)
    if all(j is not None for j in hits):
        ks = m.k
        flat = 0
        for j, k in zip(hits, ks):
            flat = flat * k + j
        return float(m.values[flat])
    phi = np.ones(m.values.size)
    for l, r in enumerate(recips):
        phi = phi * (m.barys[l] * r[m.pole_indices(l)])
    den = float(phi.sum())
    if den == 0.0:
        raise PoleEncountered(f"denominator vanished at {tuple(x)}", x=x)
    return float((m.values * phi).sum()) / den


def emit_network_graph(m: BarycentricModel, part: str = "denominator") -> str:
    """DOT description of the layered network equivalent to one part.

    Layers: omega inputs, sum(k_l) Lagrange-basis nodes, K product
    nodes, one output sum.  Final-layer edge weights are the barycentric
    weights (denominator) or weights times values (numerator).
    """
    if part not in ("numerator", "denominator"):
        raise InvalidInput("part must be 'numerator' or 'denominator'")
    coeff = m.weights * m.values if part == "numerator" else m.weights
    ks = m.k
    buf = io.StringIO()
    buf.write(f"digraph {part} {{\n  rankdir=LR;\n")
    for l in range(m.omega):
        buf.write(f'  x{l + 1} [shape=circle label="x{l + 1}"];\n')
    for l, lam in enumerate(m.lambdas):
        for j, point in enumerate(lam):
            buf.write(
                f'  b{l + 1}_{j + 1} [shape=box label="1/(x{l + 1} - ({point!r}))"];\n'
            )
    for flat in range(coeff.size):
        buf.write(f'  p{flat + 1} [shape=circle label="prod"];\n')
    buf.write('  out [shape=doublecircle label="sum"];\n')
    for l, lam in enumerate(m.lambdas):
        for j in range(lam.size):
            buf.write(f"  x{l + 1} -> b{l + 1}_{j + 1};\n")
    for flat in range(coeff.size):
        idx = np.unravel_index(flat, ks)
        for l, j in enumerate(idx):
            buf.write(f"  b{l + 1}_{int(j) + 1} -> p{flat + 1};\n")
        buf.write(f'  p{flat + 1} -> out [label="{coeff[flat]!r}"];\n')
    buf.write("}\n")
    return buf.getvalue()
