"""Small dense linear algebra with an explicit tolerance policy.

Two arithmetic modes are supported.  In floating mode ranks come from the SVD
with the cutoff ``sigma_max * max(rows, cols) * rel_epsilon``.  In exact mode
every entry is converted to a :class:`fractions.Fraction` and the matrix is
reduced by fraction-free (Bareiss) elimination over the integers, so ranks and
kernels are exact.

Exact-mode arrays are numpy arrays of dtype ``object`` holding Fractions.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, ExactModeUnavailable, NonFiniteEntry

__all__ = [
    "Tolerance",
    "FLOATING",
    "EXACT",
    "RankNullspace",
    "to_fraction",
    "as_exact",
    "as_float",
    "is_exact_array",
    "rank_nullspace",
    "rank",
    "row_space",
    "least_squares",
    "solve_exact",
    "inverse",
]


@dataclass(frozen=True)
class Tolerance:
    """Arithmetic mode plus the relative rank cutoff used in floating mode."""

    mode: str = "floating"
    rel_epsilon: float = 1e-10

    def __post_init__(self):
        if self.mode not in ("floating", "exact"):
            raise ValueError(f"unknown tolerance mode {self.mode!r}")
        if not self.rel_epsilon > 0:
            raise ValueError("rel_epsilon must be positive")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


FLOATING = Tolerance()
EXACT = Tolerance("exact")


class RankNullspace(NamedTuple):
    rank: int
    kernel: np.ndarray  # shape (cols - rank, cols); one basis vector per row


def to_fraction(x) -> Fraction:
    """Exact rational value of a scalar.

    Binary floats are rationals and convert without rounding; anything that is
    not a real rational number raises :class:`ExactModeUnavailable`.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise NonFiniteEntry(f"non-finite entry {x!r}")
        return Fraction(float(x))
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise NonFiniteEntry(f"non-finite entry {x!r}")
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise ExactModeUnavailable(f"cannot represent {x!r} as a rational number")


def as_exact(a) -> np.ndarray:
    """Object array of Fractions with the same shape as ``a``."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def as_float(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        arr = np.vectorize(float, otypes=[np.float64])(arr) if arr.size else arr.astype(np.float64)
    else:
        arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntry("matrix has NaN or infinite entries")
    return arr


def is_exact_array(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def _as_2d(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {arr.shape}")
    if arr.shape[1] == 0:
        raise DimensionMismatch("matrix has no columns")
    return arr


# -- exact elimination -------------------------------------------------------

def _integer_rows(m: np.ndarray) -> list[list[int]]:
    # scaling a row by a nonzero constant preserves rank and kernel
    rows = []
    for row in m:
        fr = [to_fraction(v) for v in row]
        den = 1
        for v in fr:
            den = den * v.denominator // math.gcd(den, v.denominator)
        rows.append([int(v * den) for v in fr])
    return rows


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (rows, pivot columns)."""
    m = [r[:] for r in rows]
    nrows = len(m)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        pc = prow[c]
        for i in range(r + 1, nrows):
            row = m[i]
            ic = row[c]
            for j in range(c + 1, ncols):
                # exact: every entry is a minor of the input
                row[j] = (pc * row[j] - ic * prow[j]) // prev
            row[c] = 0
        prev = pc
        pivots.append(c)
        r += 1
    return m, pivots


def _echelon_kernel(ech: list[list[int]], pivots: list[int], ncols: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.empty((len(free), ncols), dtype=object)
    for k, f in enumerate(free):
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = ech[r]
            s = sum((row[c] * x[c] for c in range(pc + 1, ncols) if row[c]), Fraction(0))
            x[pc] = -s / row[pc]
        basis[k] = x
    return basis


def _exact_rank_nullspace(m: np.ndarray) -> RankNullspace:
    ncols = m.shape[1]
    ech, pivots = _bareiss(_integer_rows(m), ncols)
    return RankNullspace(len(pivots), _echelon_kernel(ech, pivots, ncols))


# -- floating ----------------------------------------------------------------

def _svd_rank(s: np.ndarray, shape, tol: Tolerance) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = s[0] * max(shape) * tol.rel_epsilon
    return int(np.count_nonzero(s > cutoff))


def singular_values(m) -> np.ndarray:
    arr = as_float(_as_2d(m))
    if arr.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.svd(arr, compute_uv=False)


def rank_nullspace(m, tol: Tolerance = FLOATING) -> RankNullspace:
    """Rank of ``m`` and a basis of its kernel.

    Floating mode returns an orthonormal kernel basis; exact mode returns the
    reduced-echelon basis (one vector per free column) as Fractions.
    """
    arr = _as_2d(m)
    if tol.exact:
        return _exact_rank_nullspace(arr)
    arr = as_float(arr)
    ncols = arr.shape[1]
    if arr.shape[0] == 0:
        return RankNullspace(0, np.eye(ncols))
    _, s, vt = np.linalg.svd(arr, full_matrices=True)
    r = _svd_rank(s, arr.shape, tol)
    return RankNullspace(r, vt[r:].copy())


def rank(m, tol: Tolerance = FLOATING) -> int:
    arr = _as_2d(m)
    if tol.exact:
        return len(_bareiss(_integer_rows(arr), arr.shape[1])[1])
    arr = as_float(arr)
    if arr.shape[0] == 0:
        return 0
    return _svd_rank(np.linalg.svd(arr, compute_uv=False), arr.shape, tol)


def row_space(m, tol: Tolerance = FLOATING) -> np.ndarray:
    """Basis of the span of the rows of ``m`` (orthonormal in floating mode)."""
    arr = _as_2d(m)
    if tol.exact:
        ech, pivots = _bareiss(_integer_rows(arr), arr.shape[1])
        basis = np.empty((len(pivots), arr.shape[1]), dtype=object)
        for k in range(len(pivots)):
            basis[k] = [Fraction(v) for v in ech[k]]
        return basis
    arr = as_float(arr)
    if arr.shape[0] == 0:
        return np.zeros((0, arr.shape[1]))
    _, s, vt = np.linalg.svd(arr, full_matrices=False)
    return vt[: _svd_rank(s, arr.shape, tol)].copy()


def least_squares(m, rhs) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution and the residual norm."""
    arr = as_float(_as_2d(m))
    b = as_float(np.asarray(rhs).reshape(-1))
    if b.shape[0] != arr.shape[0]:
        raise DimensionMismatch(f"rhs has length {b.shape[0]}, matrix has {arr.shape[0]} rows")
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1]), 0.0
    x, *_ = np.linalg.lstsq(arr, b, rcond=None)
    return x, float(np.linalg.norm(arr @ x - b))


def solve_exact(m, rhs) -> np.ndarray | None:
    """An exact solution of ``m @ x = rhs`` (free variables set to 0), or None."""
    arr = _as_2d(m)
    b = np.asarray(rhs, dtype=object).reshape(-1)
    if b.shape[0] != arr.shape[0]:
        raise DimensionMismatch(f"rhs has length {b.shape[0]}, matrix has {arr.shape[0]} rows")
    ncols = arr.shape[1]
    aug = np.concatenate([np.asarray(arr, dtype=object), b.reshape(-1, 1)], axis=1)
    ech, pivots = _bareiss(_integer_rows(aug), ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        row = ech[r]
        s = sum((row[c] * x[c] for c in range(pc + 1, ncols) if row[c]), Fraction(0))
        x[pc] = (row[ncols] - s) / row[pc]
    return np.array(x, dtype=object)


def inverse(m) -> np.ndarray:
    """Inverse of a square matrix, exact for object arrays."""
    arr = _as_2d(m)
    n = arr.shape[0]
    if arr.shape[1] != n:
        raise DimensionMismatch("matrix is not square")
    if not is_exact_array(arr):
        return np.linalg.inv(as_float(arr))
    if rank(arr, EXACT) < n:
        raise np.linalg.LinAlgError("singular matrix")
    cols = []
    for k in range(n):
        e = np.array([Fraction(int(i == k)) for i in range(n)], dtype=object)
        cols.append(solve_exact(arr, e))
    return np.array(cols, dtype=object).T.copy()
