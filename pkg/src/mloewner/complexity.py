"""Closed-form flop and storage accounting: recursive vs full null space.

The recursive scheme performs ``prod_{j<l} k_j`` solves of size ``k_l``
at level l, so its flop count is ``sum_l k_l^3 * prod_{j<l} k_j`` at
the k^3-per-solve convention, against ``(prod k_l)^3`` for one dense
null-space computation.  Storage compares the largest 1-D matrix
(``max k_l`` square) with the full ``(prod k_l)`` square matrix.  Byte
figures are reported at 8 (real double) and 16 (complex double) bytes
per entry; the worked examples' KB/GB numbers follow the 16-byte rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInput

REAL_BYTES = 8
COMPLEX_BYTES = 16


def _check(k: Sequence[int]) -> list[int]:
    ks = [int(x) for x in k]
    if not ks:
        raise InvalidInput("empty support-size list")
    if any(x < 1 for x in ks):
        raise InvalidInput("support sizes must be >= 1")
    return ks


def flops_recursive(k: Sequence[int]) -> int:
    """Flops of the cascaded one-variable solves."""
    ks = _check(k)
    return sum(ks[l] ** 3 * math.prod(ks[:l]) for l in range(len(ks)))


def flops_full(k: Sequence[int]) -> int:
    """Flops of one dense null-space solve of the full matrix: N^3."""
    return math.prod(_check(k)) ** 3


def worst_case_flops(k: int, n: int) -> int:
    """Closed form of the recursive count for n variables of equal size k.

    Geometric series ``k^3 (1 - k^n) / (1 - k)``; the k = 1 case is the
    singular limit of the series and degenerates to n unit solves.
    """
    if n < 1:
        raise InvalidInput("need n >= 1 variables")
    if k < 1:
        raise InvalidInput("need k >= 1")
    if k == 1:
        return n
    return k**3 * (k**n - 1) // (k - 1)


@dataclass(frozen=True)
class StorageAccount:
    entries_recursive: int
    entries_full: int
    bytes_recursive: int
    bytes_full: int


def max_storage(k: Sequence[int], bytes_per_entry: int = COMPLEX_BYTES) -> StorageAccount:
    """Largest matrix held by each route, in entries and bytes."""
    ks = _check(k)
    rec = max(ks) ** 2
    full = math.prod(ks) ** 2
    return StorageAccount(rec, full, rec * bytes_per_entry, full * bytes_per_entry)


@dataclass(frozen=True)
class ComplexityReport:
    """Recursive-vs-full account for one support-size vector."""

    k: tuple[int, ...]
    flops_recursive: int
    flops_full: int
    max_entries_recursive: int
    max_entries_full: int

    def bytes_recursive(self, per_entry: int = COMPLEX_BYTES) -> int:
        return self.max_entries_recursive * per_entry

    def bytes_full(self, per_entry: int = COMPLEX_BYTES) -> int:
        return self.max_entries_full * per_entry

    def to_dict(self) -> dict:
        return {
            "k": list(self.k),
            "flops_recursive": self.flops_recursive,
            "flops_full": self.flops_full,
            "max_entries_recursive": self.max_entries_recursive,
            "max_entries_full": self.max_entries_full,
            "bytes_recursive_real": self.bytes_recursive(REAL_BYTES),
            "bytes_recursive_complex": self.bytes_recursive(COMPLEX_BYTES),
            "bytes_full_real": self.bytes_full(REAL_BYTES),
            "bytes_full_complex": self.bytes_full(COMPLEX_BYTES),
        }


def report_for(k: Sequence[int]) -> ComplexityReport:
    ks = _check(k)
    storage = max_storage(ks)
    return ComplexityReport(
        tuple(ks),
        flops_recursive(ks),
        flops_full(ks),
        storage.entries_recursive,
        storage.entries_full,
    )


def format_bytes(n: int) -> str:
    """Human units in powers of 1024, e.g. 6400 -> '6.25 KB'."""
    units = ["B", "KB", "MB", "GB", "TB", "PB"]
    value = float(n)
    for unit in units:
        if value < 1024 or unit == units[-1]:
            if value == int(value):
                return f"{value:g} {unit}"
            return f"{value:.2f} {unit}"
        value /= 1024
    raise AssertionError("unreachable")


def worst_case_curve(k: int, omegas: Sequence[int]) -> list[tuple[int, int]]:
    """(omega, worst-case flops) rows for equal-size supports."""
    return [(int(n), worst_case_flops(k, int(n))) for n in omegas]
