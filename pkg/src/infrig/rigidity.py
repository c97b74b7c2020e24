"""Kinematic and static analysis of bar-joint frameworks.

Euclidean frameworks use the usual |E| x d|V| rigidity matrix.  Hyperbolic
and spherical frameworks work in ambient coordinates: each edge row realizes
``<p_i - p_j, q_i - q_j>_g`` and is followed by one tangency row
``<p_i, q_i>_g`` per vertex, so the kernel is exactly the space of tangent
infinitesimal motions.

Statics (equilibrium, resolution, the static degrees of freedom) is defined
for Euclidean frameworks only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _kernels
from .errors import DegenerateSpan, DimensionMismatch, ExactModeUnavailable
from .exterior import Bivector
from .framework import Framework, Geometry, Stress, affine_span_dim, metric_diagonal
from .linalg import (
    FLOATING,
    Tolerance,
    as_exact,
    as_float,
    least_squares,
    rank,
    rank_nullspace,
    row_space,
    singular_values,
    solve_exact,
)

__all__ = [
    "RigidityMatrix",
    "KinematicReport",
    "StaticReport",
    "Unresolvable",
    "rigidity_matrix",
    "trivial_motions",
    "trivial_generator_matrix",
    "analyze_kinematics",
    "equilibrium_matrix",
    "total_bivector",
    "is_equilibrium_load",
    "edge_load",
    "resolve_load",
    "analyze_statics",
    "pairing",
    "edge_residuals",
    "UNRESOLVABLE_RTOL",
    "EQUILIBRIUM_RTOL",
]

UNRESOLVABLE_RTOL = 1e-8
EQUILIBRIUM_RTOL = 1e-9


def _require_mode(fw: Framework, tol: Tolerance) -> None:
    if tol.exact and not fw.is_exact:
        raise ExactModeUnavailable(
            "exact analysis needs rational coordinates; this framework has floating-point ones"
        )


def _points(fw: Framework, tol: Tolerance) -> np.ndarray:
    _require_mode(fw, tol)
    return fw.points if tol.exact else fw.float_points()


@dataclass(frozen=True, eq=False)
class RigidityMatrix:
    matrix: np.ndarray
    row_index: tuple  # (i, j) per edge row, then ("tangent", i) per tangency row
    col_index: tuple  # (vertex, coordinate) per column
    geometry: Geometry
    tangency_rows: slice | None = None

    @property
    def shape(self):
        return self.matrix.shape


def rigidity_matrix(fw: Framework, tol: Tolerance = FLOATING) -> RigidityMatrix:
    """Constraint matrix whose kernel is the space of infinitesimal motions."""
    pts = _points(fw, tol)
    k = fw.ambient_dim
    cols = tuple((i, c) for i in range(fw.n_vertices) for c in range(k))
    if fw.geometry is Geometry.EUCLIDEAN:
        mat = _kernels.edge_rows(pts, fw.edges)
        return RigidityMatrix(mat, tuple(fw.edges), cols, fw.geometry)
    g = metric_diagonal(fw.geometry, k, exact=tol.exact)
    mat = np.concatenate([_kernels.edge_rows(pts, fw.edges, g), _kernels.tangency_rows(pts, g)], axis=0)
    rows = tuple(fw.edges) + tuple(("tangent", i) for i in range(fw.n_vertices))
    return RigidityMatrix(mat, rows, cols, fw.geometry, slice(fw.n_edges, fw.n_edges + fw.n_vertices))


def trivial_generator_matrix(fw: Framework, tol: Tolerance = FLOATING) -> np.ndarray:
    """Rows are restrictions of a spanning set of ambient infinitesimal isometries."""
    pts = _points(fw, tol)
    if fw.geometry is Geometry.EUCLIDEAN:
        return _kernels.trivial_generators(pts)
    return _kernels.trivial_generators(pts, metric_diagonal(fw.geometry, fw.ambient_dim, exact=tol.exact))


def trivial_motions(fw: Framework, tol: Tolerance = FLOATING) -> list[np.ndarray]:
    """A basis of the trivial motions, each an (n, k) velocity field."""
    gens = trivial_generator_matrix(fw, tol)
    shape = fw.points.shape
    if gens.shape[0] == 0 or gens.shape[1] == 0:
        return []
    return [v.reshape(shape) for v in row_space(gens, tol)]


@dataclass(frozen=True, eq=False)
class KinematicReport:
    dim_motions: int
    dim_trivial: int
    dof: int
    rigid: bool
    motion_basis: list = field(repr=False)
    trivial_basis: list = field(repr=False)
    degenerate_span: bool
    singular_values: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "dim_motions": self.dim_motions,
            "dim_trivial": self.dim_trivial,
            "dof": self.dof,
            "rigid": self.rigid,
            "degenerate_span": self.degenerate_span,
            "singular_values": [float(s) for s in self.singular_values],
        }


def analyze_kinematics(fw: Framework, tol: Tolerance = FLOATING) -> KinematicReport:
    if fw.n_vertices == 0:
        raise DimensionMismatch("framework has no vertices")
    rm = rigidity_matrix(fw, tol)
    r, kernel = rank_nullspace(rm.matrix, tol)
    ncols = rm.matrix.shape[1]
    dim_motions = ncols - r
    trivial = trivial_motions(fw, tol)
    dim_trivial = len(trivial)
    shape = fw.points.shape
    span = affine_span_dim(fw, tol)
    return KinematicReport(
        dim_motions=dim_motions,
        dim_trivial=dim_trivial,
        dof=dim_motions - dim_trivial,
        rigid=dim_motions == dim_trivial,
        motion_basis=[v.reshape(shape) for v in kernel],
        trivial_basis=trivial,
        degenerate_span=span < fw.dimension,
        singular_values=singular_values(rm.matrix) if rm.matrix.shape[0] else np.zeros(0),
    )


# -- statics -------------------------------------------------------------------

def _require_euclidean(fw: Framework) -> None:
    if fw.geometry is not Geometry.EUCLIDEAN:
        raise ValueError("statics is defined for Euclidean frameworks only")


def _load_array(fw: Framework, F) -> np.ndarray:
    F = np.asarray(F)
    if F.shape != fw.points.shape:
        raise DimensionMismatch(f"load has shape {F.shape}, expected {fw.points.shape}")
    return F


def equilibrium_matrix(fw: Framework, tol: Tolerance = FLOATING) -> np.ndarray:
    """Matrix of the linear map load -> components of its total bivector."""
    _require_euclidean(fw)
    return _kernels.equilibrium_matrix(_points(fw, tol))


def total_bivector(fw: Framework, F) -> Bivector:
    """``sum_i (1, p_i) ^ (0, f_i)``, exact when both inputs are exact."""
    _require_euclidean(fw)
    F = _load_array(fw, F)
    exact = fw.is_exact and F.dtype == object
    tol = Tolerance("exact") if exact else FLOATING
    B = equilibrium_matrix(fw, tol)
    f = F.reshape(-1) if exact else as_float(F).reshape(-1)
    return Bivector(fw.dimension + 1, B.dot(f))


def _is_exact_load(fw: Framework, F: np.ndarray) -> bool:
    if not fw.is_exact:
        return False
    if F.dtype == object:
        return True
    return np.issubdtype(F.dtype, np.integer)


def is_equilibrium_load(fw: Framework, F, tol: Tolerance = FLOATING) -> bool:
    """True iff the force system of the load is equivalent to zero."""
    F = _load_array(fw, F)
    if _is_exact_load(fw, F) or tol.exact:
        _require_mode(fw, tol)
        T = total_bivector(fw, as_exact(F))
        return T.is_zero()
    T = total_bivector(fw, F)
    pts = fw.float_points()
    Ff = as_float(F)
    scale = float(np.sum(np.sqrt(1.0 + np.sum(pts * pts, axis=1)) * np.linalg.norm(Ff, axis=1)))
    return T.norm() <= EQUILIBRIUM_RTOL * max(scale, np.finfo(float).tiny)


def edge_load(fw: Framework, i: int, j: int) -> np.ndarray:
    """The load ``f_i = p_i - p_j``, ``f_j = p_j - p_i``, zero elsewhere."""
    pts = fw.points
    F = np.zeros_like(pts) if pts.dtype != object else np.full(pts.shape, 0, dtype=object)
    F[i] = pts[i] - pts[j]
    F[j] = pts[j] - pts[i]
    return F


@dataclass(frozen=True)
class Unresolvable:
    residual: float

    def __bool__(self):
        return False


def resolve_load(fw: Framework, F, tol: Tolerance = FLOATING) -> Stress | Unresolvable:
    """Stress ``w`` with ``f_i = sum_j w_ij (p_i - p_j)``, or :class:`Unresolvable`.

    Floating mode takes the minimum-norm least-squares stress and accepts it
    when the residual is at most ``1e-8 * |F|``.
    """
    _require_euclidean(fw)
    F = _load_array(fw, F)
    if tol.exact:
        _require_mode(fw, tol)
        R = rigidity_matrix(fw, tol).matrix
        rhs = as_exact(F).reshape(-1)
        if R.shape[0] == 0:
            if all(v == 0 for v in rhs):
                return Stress(fw.edges, np.zeros(0, dtype=object))
            return Unresolvable(float(np.linalg.norm(as_float(rhs))))
        w = solve_exact(R.T, rhs)
        if w is None:
            _, res = least_squares(as_float(R).T, as_float(rhs))
            return Unresolvable(res)
        return Stress(fw.edges, w)
    R = rigidity_matrix(fw, FLOATING).matrix
    rhs = as_float(F).reshape(-1)
    norm = float(np.linalg.norm(rhs))
    if R.shape[0] == 0:
        return Stress(fw.edges, np.zeros(0)) if norm == 0 else Unresolvable(norm)
    w, res = least_squares(R.T, rhs)
    if res <= UNRESOLVABLE_RTOL * norm:
        return Stress(fw.edges, w)
    return Unresolvable(res)


@dataclass(frozen=True)
class StaticReport:
    dim_equilibrium: int
    dim_resolvable: int
    static_dof: int

    def to_dict(self) -> dict:
        return {
            "dim_equilibrium": self.dim_equilibrium,
            "dim_resolvable": self.dim_resolvable,
            "static_dof": self.static_dof,
        }


def analyze_statics(fw: Framework, tol: Tolerance = FLOATING) -> StaticReport:
    _require_euclidean(fw)
    if affine_span_dim(fw, tol) < fw.dimension:
        raise DegenerateSpan("vertices do not affinely span the space")
    B = equilibrium_matrix(fw, tol)
    dim_eq = B.shape[1] - rank(B, tol)
    R = rigidity_matrix(fw, tol).matrix
    dim_res = rank(R, tol) if R.shape[0] else 0
    return StaticReport(dim_eq, dim_res, dim_eq - dim_res)


def pairing(Q, F):
    """Virtual work ``sum_i <q_i, f_i>``."""
    Q, F = np.asarray(Q), np.asarray(F)
    if Q.shape != F.shape:
        raise DimensionMismatch(f"velocity field {Q.shape} and load {F.shape} differ in shape")
    return (Q * F).sum()


def edge_residuals(fw: Framework, Q) -> np.ndarray:
    """``<p_i - p_j, q_i - q_j>_g`` per edge, in floating point."""
    pts = fw.float_points()
    q = as_float(Q)
    if q.shape != pts.shape:
        raise DimensionMismatch(f"field has shape {q.shape}, expected {pts.shape}")
    g = metric_diagonal(fw.geometry, fw.ambient_dim)
    if not fw.edges:
        return np.zeros(0)
    e = np.asarray(fw.edges)
    dp = pts[e[:, 0]] - pts[e[:, 1]]
    dq = q[e[:, 0]] - q[e[:, 1]]
    return np.sum(g * dp * dq, axis=1)


def expected_trivial_dim(d: int) -> int:
    return comb(d + 1, 2)
