"""Single-variable Loewner matrices and null-space machinery.

The Loewner matrix of column points ``lam`` (with samples ``w``) and row
points ``mu`` (with samples ``v``) has entries
``(v_i - w_j) / (mu_i - lam_j)``.  Its right null space carries the
barycentric weights of a rational interpolant through the data, and the
decay of its normalized singular values reveals the degree of the
underlying function in that variable.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateSupport,
    InvalidInput,
    MethodFallbackWarning,
    SamplingError,
)


class NullMethod(enum.Enum):
    """How the right null vector of a Loewner matrix is computed.

    SVD takes the last right singular vector, QR the last column of the
    orthogonal factor of the transpose, and SOLVE resolves the first
    k-1 columns against the last one.
    """

    SVD = "svd"
    QR = "qr"
    SOLVE = "solve"

    @classmethod
    def from_name(cls, name: str | int | "NullMethod") -> "NullMethod":
        """Accepts 'svd'/'qr'/'solve' or the numeric codes 1/2/3."""
        if isinstance(name, cls):
            return name
        if isinstance(name, int):
            return {1: cls.SVD, 2: cls.QR, 3: cls.SOLVE}[name]
        return cls(str(name).lower())


@dataclass(frozen=True)
class LoewnerMatrix:
    rows: np.ndarray
    cols: np.ndarray
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", np.asarray(self.rows, dtype=float))
        object.__setattr__(self, "cols", np.asarray(self.cols, dtype=float))
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))


def build_loewner_1d(lam, mu, w, v) -> LoewnerMatrix:
    """Divided-difference matrix ``(v_i - w_j) / (mu_i - lam_j)``."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    if w.size != lam.size or v.size != mu.size:
        raise InvalidInput("sample counts must match point counts")
    denom = mu[:, None] - lam[None, :]
    if np.any(denom == 0.0):
        raise DegenerateSupport("coincident column and row point")
    entries = (v[:, None] - w[None, :]) / denom
    return LoewnerMatrix(mu, lam, entries)


def normalized_singular_values(m) -> np.ndarray:
    """Singular values divided by the largest one, in descending order."""
    a = m.entries if isinstance(m, LoewnerMatrix) else np.asarray(m, dtype=float)
    if a.size == 0:
        raise InvalidInput("empty matrix")
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return np.zeros_like(s)
    return s / s[0]


def estimate_order(samples, points, tol_ord: float) -> int:
    """Degree of the sampled univariate slice, from Loewner rank.

    All axis points are split alternately (odd indices as columns, even
    as rows) into a full square-ish 1-D Loewner matrix; the order is the
    count of normalized singular values at or above ``tol_ord``.  A
    model needs ``d + 1`` column points for a variable of order ``d``.
    ``tol_ord = 0`` disables detection and returns the column-pool
    capacity minus one.
    """
    samples = np.asarray(samples, dtype=float)
    points = np.asarray(points, dtype=float)
    if points.size < 2:
        raise InvalidInput("need at least two axis points")
    if not np.isfinite(samples).all():
        raise SamplingError("non-finite sample in order estimation")
    capacity = points[1::2].size
    if tol_ord == 0:
        return int(capacity) - 1
    if not 0.0 < tol_ord <= 1.0:
        raise InvalidInput(f"tol_ord must be 0 or in (0, 1], got {tol_ord}")
    m = build_loewner_1d(points[1::2], points[0::2], samples[1::2], samples[0::2])
    nsv = normalized_singular_values(m)
    return int(np.count_nonzero(nsv >= tol_ord))


# Relative size under which a trailing entry no longer anchors the
# scale-to-one normalization.
_LAST_ENTRY_FLOOR = 1e-8


def _canonical(c: np.ndarray) -> np.ndarray:
    """Scale the last entry to one, else unit norm with positive lead."""
    peak = np.abs(c).max()
    if peak == 0.0:
        return c
    if abs(c[-1]) > _LAST_ENTRY_FLOOR * peak:
        return c / c[-1]
    c = c / np.linalg.norm(c)
    lead = c[np.flatnonzero(c)[0]]
    return c if lead > 0 else -c


def null_vector(m, method: NullMethod = NullMethod.SVD) -> np.ndarray:
    """Right null vector of a Loewner matrix, canonically normalized."""
    a = m.entries if isinstance(m, LoewnerMatrix) else np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[1] < 1:
        raise InvalidInput("need a matrix with at least one column")
    method = NullMethod.from_name(method)
    kcols = a.shape[1]
    if method is NullMethod.SVD:
        c = np.linalg.svd(a)[2][-1]
    elif method is NullMethod.QR:
        # Null(A) is spanned by the trailing columns of the orthogonal
        # factor of A^T; column pivoting keeps them trailing.
        qmat = scipy.linalg.qr(a.T, pivoting=True)[0]
        c = qmat[:, -1]
    else:
        lead, last = a[:, : kcols - 1], a[:, kcols - 1]
        if kcols == 1:
            c = np.ones(1)
        elif np.linalg.matrix_rank(lead) < kcols - 1:
            warnings.warn(
                "singular leading block, falling back to SVD",
                MethodFallbackWarning,
            )
            c = np.linalg.svd(a)[2][-1]
        else:
            y = np.linalg.lstsq(lead, last, rcond=None)[0]
            c = np.concatenate([-y, [1.0]])
    return _canonical(c)


def prune_weights(c, tol_k: float) -> np.ndarray:
    """Zero out entries below ``tol_k`` times the largest magnitude.

    ``tol_k = -1`` means no deletion; the input comes back unchanged.
    """
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        raise InvalidInput("empty weight vector")
    if tol_k == -1:
        return c.copy()
    if tol_k < 0:
        raise InvalidInput(f"tol_k must be -1 or >= 0, got {tol_k}")
    out = c.copy()
    out[np.abs(c) < tol_k * np.abs(c).max()] = 0.0
    return out
