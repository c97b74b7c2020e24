"""Bivectors in the second exterior power of R^n and their duals.

Storage is strictly upper triangular: component ``k`` of a bivector on R^n is
the coefficient of ``e_a ^ e_b`` where ``(a, b)`` is the k-th pair of
:func:`pair_index` (lexicographic, ``a < b``).  The same layout is used for
dual bivectors, and the pairing between the two is the plain dot product of
component vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch
from .linalg import FLOATING, Tolerance, is_exact_array, rank

__all__ = [
    "pair_index",
    "Bivector",
    "DualBivector",
    "wedge",
    "contract",
    "pairing",
    "induced_map",
    "is_decomposable",
]


@lru_cache(maxsize=None)
def pair_index(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


def _vec(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {arr.shape}")
    return arr


def _n_from_count(count: int) -> int:
    n = int(round((1 + (1 + 8 * count) ** 0.5) / 2))
    if n * (n - 1) // 2 != count:
        raise DimensionMismatch(f"{count} is not a binomial coefficient C(n, 2)")
    return n


class _Antisymmetric:
    dim: int
    components: np.ndarray

    def __post_init__(self):
        comps = _vec(self.components)
        if comps.shape[0] != self.dim * (self.dim - 1) // 2:
            raise DimensionMismatch(
                f"{type(self).__name__} on R^{self.dim} needs {self.dim * (self.dim - 1) // 2} components"
            )
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_components(cls, components):
        comps = _vec(components)
        return cls(_n_from_count(comps.shape[0]), comps)

    @classmethod
    def zero(cls, dim: int, exact: bool = False):
        if exact:
            from fractions import Fraction

            return cls(dim, np.array([Fraction(0)] * (dim * (dim - 1) // 2), dtype=object))
        return cls(dim, np.zeros(dim * (dim - 1) // 2))

    @classmethod
    def from_matrix(cls, mat):
        mat = np.asarray(mat)
        n = mat.shape[0]
        return cls(n, np.array([mat[a, b] for a, b in pair_index(n)], dtype=mat.dtype))

    def matrix(self) -> np.ndarray:
        """The antisymmetric n x n matrix with ``m[a, b] = c[a][b]``."""
        c = self.components
        m = np.zeros((self.dim, self.dim), dtype=c.dtype)
        for k, (a, b) in enumerate(pair_index(self.dim)):
            m[a, b] = c[k]
            m[b, a] = -c[k]
        return m

    def __getitem__(self, ab):
        a, b = ab
        if a == b:
            return 0 * self.components[0] if self.components.size else 0
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        return sign * self.components[pair_index(self.dim).index((a, b))]

    def _check(self, other):
        if type(other) is not type(self) or other.dim != self.dim:
            raise DimensionMismatch("operands live in different spaces")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.dim, self.components + other.components)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.dim, self.components - other.components)

    def __neg__(self):
        return type(self)(self.dim, -self.components)

    def __mul__(self, s):
        return type(self)(self.dim, self.components * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return type(self)(self.dim, self.components / s)

    def is_zero(self, atol: float = 0.0) -> bool:
        if is_exact_array(self.components):
            return all(v == 0 for v in self.components)
        return bool(np.all(np.abs(self.components.astype(float)) <= atol))

    def norm(self) -> float:
        return float(np.linalg.norm(self.components.astype(float)))


@dataclass(frozen=True, eq=False)
class Bivector(_Antisymmetric):
    dim: int
    components: np.ndarray


@dataclass(frozen=True, eq=False)
class DualBivector(_Antisymmetric):
    dim: int
    components: np.ndarray


def _wedge_components(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    idx = pair_index(n)
    a = np.fromiter((p[0] for p in idx), dtype=np.intp, count=len(idx))
    b = np.fromiter((p[1] for p in idx), dtype=np.intp, count=len(idx))
    return x[a] * y[b] - x[b] * y[a]


def wedge(x, y) -> Bivector:
    """``x ^ y`` with components ``x[a] y[b] - x[b] y[a]`` for ``a < b``."""
    x, y = _vec(x), _vec(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"cannot wedge vectors of lengths {x.shape[0]} and {y.shape[0]}")
    return Bivector(x.shape[0], _wedge_components(x, y))


def contract(x, t: DualBivector) -> np.ndarray:
    """The covector ``y -> <x ^ y, t>``."""
    x = _vec(x)
    if x.shape[0] != t.dim:
        raise DimensionMismatch(f"vector of length {x.shape[0]} against dual bivector on R^{t.dim}")
    return x @ t.matrix()


def pairing(b: Bivector, t: DualBivector):
    if b.dim != t.dim:
        raise DimensionMismatch("bivector and dual bivector live on different spaces")
    return b.components @ t.components


def induced_map(m) -> np.ndarray:
    """Matrix of ``x ^ y -> Mx ^ My`` on the component vectors."""
    m = np.asarray(m)
    n = m.shape[0]
    cols = [_wedge_components(m[:, a], m[:, b]) for a, b in pair_index(n)]
    return np.array(cols, dtype=m.dtype).T.copy()


def is_decomposable(b: Bivector, tol: Tolerance = FLOATING) -> bool:
    """True when ``b = x ^ y`` for some vectors (antisymmetric rank <= 2)."""
    if b.dim < 4:
        return True
    return rank(b.matrix(), tol) <= 2
