"""Projective maps acting on frameworks, and the projective form of forces and velocities.

A projective map is given by an invertible (d+1) x (d+1) matrix ``M`` acting
on homogeneous coordinates ``(1, p)``.  Row 0 of ``M`` is the functional
``l(p) = M[0] . (1, p)``; its zero set ``L`` is the hyperplane sent to
infinity.  Both transports are normalized by scaling ``l`` to unit spatial
gradient, so ``h(p) = l(p) / |M[0, 1:]|`` is the signed distance to ``L``:

* static:    ``f -> h(p)^2 dPhi_p f``
* kinematic: ``q -> h(p)^-2 (dPhi_p^-1)^T q``

The normalization makes the transports independent of the scale and sign of
``M``.  When ``M[0, 1:] = 0`` the map is affine, ``x -> A x + b`` with
``A = M[1:, 1:] / M[0, 0]``, and the transports are ``f -> A f`` and
``q -> A^-T q``.

Projective velocities at ``[x]`` are classes of dual bivectors modulo those
vanishing on ``x ^ R^(d+1)``; a class is determined by the covector
``contract(x, t)``, and the canonical representative is ``x ^ a / |x|^2``
where ``a`` is that covector.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import (
    AffineMap,
    BasePointMismatch,
    DimensionMismatch,
    NonDecomposable,
    PointAtInfinity,
    SchemaError,
    SingularMap,
    VertexAtInfinity,
)
from .exterior import Bivector, DualBivector, contract, is_decomposable, pairing, wedge
from .framework import Framework, Geometry, ProjectiveFramework, _load_json, coerce_numbers, homogenize
from .linalg import EXACT, FLOATING, Tolerance, as_exact, as_float, inverse, rank

__all__ = [
    "ProjectiveMap",
    "parse_projective_map",
    "projective_map_to_dict",
    "apply_projective",
    "h_infinity",
    "stat_matrix",
    "kin_matrix",
    "phi_stat",
    "phi_kin",
    "phi_stat_secant",
    "transport_motion",
    "transport_load",
    "DualBivectorClass",
    "lift_covector",
    "velocity_lift",
    "velocity_drop",
    "projective_motion_check",
    "ForceReduction",
    "reduce_force_system",
    "HYPERBOLIC_SHARP",
]

AT_INFINITY_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if not isinstance(m, np.ndarray) or m.dtype not in (np.float64, object):
            m = coerce_numbers(m, "matrix")
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise SchemaError("projective map needs a square matrix of size d+1 >= 2")
        tol = EXACT if m.dtype == object else FLOATING
        if rank(m, tol) < m.shape[0]:
            raise SingularMap("projective map matrix is singular")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def is_exact(self) -> bool:
        return self.matrix.dtype == object

    @property
    def infinity_functional(self) -> np.ndarray:
        """Row 0 of M: ``p -> (M (1, p))^0``."""
        return self.matrix[0]

    @property
    def gradient_norm(self) -> float:
        return float(np.linalg.norm(as_float(self.matrix[0, 1:])))

    @property
    def affine(self) -> bool:
        m0 = self.matrix[0, 1:]
        if self.is_exact:
            return all(v == 0 for v in m0)
        return self.gradient_norm <= AT_INFINITY_RTOL * float(np.abs(self.matrix).max())

    def ell(self, p):
        return self.matrix[0] @ homogenize(np.asarray(p))

    def __call__(self, p) -> np.ndarray:
        x = self.matrix @ homogenize(np.asarray(p))
        return x[1:] / x[0]

    def linear_part(self) -> np.ndarray:
        """``A`` of the affine map ``x -> A x + b`` (affine maps only)."""
        return self.matrix[1:, 1:] / self.matrix[0, 0]

    @classmethod
    def identity(cls, d: int) -> "ProjectiveMap":
        return cls(np.array([[Fraction(int(i == j)) for j in range(d + 1)] for i in range(d + 1)], dtype=object))


def parse_projective_map(document) -> ProjectiveMap:
    doc = _load_json(document)
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise SchemaError("projective map document must be an object with a 'matrix' key")
    return ProjectiveMap(coerce_numbers(doc["matrix"], "matrix"))


def projective_map_to_dict(phi: ProjectiveMap) -> dict:
    from .framework import json_number

    return {"matrix": [[json_number(v) for v in row] for row in phi.matrix]}


def _common(phi: ProjectiveMap, points: np.ndarray):
    """Matrix and points in a shared arithmetic (exact only if both are)."""
    if phi.is_exact and points.dtype == object:
        return phi.matrix, points
    return as_float(phi.matrix), as_float(points)


def _at_infinity(phi: ProjectiveMap, mat, pts) -> np.ndarray:
    ell = mat[0, 0] + pts @ mat[0, 1:]
    if ell.dtype == object:
        return np.array([v == 0 for v in ell], dtype=bool)
    scale = np.linalg.norm(mat[0]) * np.sqrt(1.0 + np.sum(pts * pts, axis=1))
    return np.abs(ell) <= AT_INFINITY_RTOL * scale


def apply_projective(phi: ProjectiveMap, fw: Framework) -> Framework:
    """Image framework; raises :class:`VertexAtInfinity` for vertices on L."""
    if fw.geometry is not Geometry.EUCLIDEAN:
        raise ValueError("projective maps act on Euclidean frameworks")
    if phi.dimension != fw.dimension:
        raise DimensionMismatch("map and framework dimensions differ")
    mat, pts = _common(phi, fw.points)
    bad = np.flatnonzero(_at_infinity(phi, mat, pts))
    if bad.size:
        raise VertexAtInfinity(int(bad[0]))
    hom = mat[:, 0][None, :] + pts @ mat[:, 1:].T
    image = hom[:, 1:] / hom[:, :1]
    return fw.replace(points=image)


def h_infinity(phi: ProjectiveMap, p) -> float:
    """Signed distance from ``p`` to the hyperplane sent to infinity."""
    if phi.affine:
        raise AffineMap("the map is affine; no finite hyperplane is sent to infinity")
    return float(phi.ell(as_float(np.asarray(p)))) / phi.gradient_norm


def _point_block(phi: ProjectiveMap, p):
    p = np.asarray(p)
    if p.shape != (phi.dimension,):
        raise DimensionMismatch(f"point has {p.shape} coordinates, map acts on dimension {phi.dimension}")
    mat, pts = _common(phi, p.reshape(1, -1))
    if _at_infinity(phi, mat, pts)[0]:
        raise PointAtInfinity(f"point {p.tolist()} lies on the hyperplane sent to infinity")
    return mat, pts


def _stat_blocks(phi: ProjectiveMap, mat, pts) -> np.ndarray:
    if phi.affine:
        A = mat[1:, 1:] / mat[0, 0]
        return np.array([A] * pts.shape[0], dtype=mat.dtype).reshape(pts.shape[0], *A.shape)
    return _kernels.stat_matrices(mat, pts)


def stat_matrix(phi: ProjectiveMap, p) -> np.ndarray:
    """Matrix of the static transport at ``p``: ``h(p)^2 dPhi_p``."""
    mat, pts = _point_block(phi, p)
    return _stat_blocks(phi, mat, pts)[0]


def kin_matrix(phi: ProjectiveMap, p) -> np.ndarray:
    """Matrix of the kinematic transport at ``p``: inverse transpose of :func:`stat_matrix`."""
    return inverse(stat_matrix(phi, p)).T


def _vector(v, d):
    v = np.asarray(v)
    if v.shape != (d,):
        raise DimensionMismatch(f"vector has shape {v.shape}, expected ({d},)")
    return v


def phi_stat(phi: ProjectiveMap, p, f) -> np.ndarray:
    f = _vector(f, phi.dimension)
    S = stat_matrix(phi, p)
    return S.dot(f if S.dtype == object else as_float(f))


def phi_kin(phi: ProjectiveMap, p, q) -> np.ndarray:
    q = _vector(q, phi.dimension)
    K = kin_matrix(phi, p)
    return K.dot(q if K.dtype == object else as_float(q))


def phi_stat_secant(phi: ProjectiveMap, p, f) -> np.ndarray:
    """``h(p) h(p+f) (Phi(p+f) - Phi(p))``; undefined when ``p+f`` is on L."""
    if phi.affine:
        raise AffineMap("secant formula needs a finite hyperplane at infinity")
    p = as_float(np.asarray(p))
    f = as_float(np.asarray(f))
    if abs(h_infinity(phi, p + f)) <= AT_INFINITY_RTOL * (1 + np.linalg.norm(p + f)):
        raise PointAtInfinity("p + f lies on the hyperplane sent to infinity")
    return h_infinity(phi, p) * h_infinity(phi, p + f) * as_float(phi(p + f) - phi(p))


def _field_blocks(phi: ProjectiveMap, fw: Framework, field) -> tuple[np.ndarray, np.ndarray]:
    if fw.geometry is not Geometry.EUCLIDEAN:
        raise ValueError("projective transport acts on Euclidean frameworks")
    field = np.asarray(field)
    if field.shape != fw.points.shape:
        raise DimensionMismatch(f"field has shape {field.shape}, expected {fw.points.shape}")
    mat, pts = _common(phi, fw.points)
    bad = np.flatnonzero(_at_infinity(phi, mat, pts))
    if bad.size:
        raise VertexAtInfinity(int(bad[0]))
    blocks = _stat_blocks(phi, mat, pts)
    if blocks.dtype == object:
        field = as_exact(field)
    else:
        field = as_float(field)
    return blocks, field


def transport_motion(phi: ProjectiveMap, fw: Framework, Q) -> np.ndarray:
    """Apply the kinematic transport vertex by vertex."""
    blocks, q = _field_blocks(phi, fw, Q)
    return _kernels.apply_blocks(blocks, q, transpose_inverse=True)


def transport_load(phi: ProjectiveMap, fw: Framework, F) -> np.ndarray:
    """Apply the static transport vertex by vertex."""
    blocks, f = _field_blocks(phi, fw, F)
    return _kernels.apply_blocks(blocks, f, transpose_inverse=False)


# -- projective velocities -------------------------------------------------------

# Covector -> velocity on the hyperboloid uses the form of signature (-,+,...,+).
# It differs from the (+,-,...,-) form only by a global sign, keeps tangency,
# and makes the central-projection transport agree with the closed form.
HYPERBOLIC_SHARP = "(-,+,...,+)"


def _sharp_diag(geometry: Geometry, n: int, exact: bool):
    if geometry is Geometry.HYPERBOLIC:
        vals = [-1] + [1] * (n - 1)
    else:
        vals = [1] * n
    if exact:
        return np.array([Fraction(v) for v in vals], dtype=object)
    return np.array(vals, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class DualBivectorClass:
    """A dual bivector ``rep`` taken modulo the ones that vanish on ``base ^ R^n``."""

    base: np.ndarray
    rep: DualBivector

    def covector(self, x=None) -> np.ndarray:
        """``contract(x, rep)``; ``x`` defaults to the stored base."""
        return contract(self.base if x is None else x, self.rep)

    def canonical(self) -> "DualBivectorClass":
        return lift_covector(self.base, self.covector())

    def same_class(self, other: "DualBivectorClass", tol: Tolerance = FLOATING) -> bool:
        if not _proportional(self.base, other.base, tol):
            return False
        diff = contract(self.base, self.rep - other.rep)
        if diff.dtype == object:
            return all(v == 0 for v in diff)
        scale = np.linalg.norm(as_float(self.base)) * (self.rep.norm() + other.rep.norm())
        return bool(np.linalg.norm(as_float(diff)) <= 1e-9 * max(scale, 1e-300))


def _proportional(x, y, tol: Tolerance = FLOATING) -> bool:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        return False
    exact = x.dtype == object and y.dtype == object
    return rank(np.array([x, y], dtype=object if exact else np.float64), EXACT if exact else tol) <= 1


def lift_covector(x, alpha) -> DualBivectorClass:
    """Class at ``[x]`` whose contraction with ``x`` is ``alpha`` (needs ``alpha(x) = 0``)."""
    x, alpha = np.asarray(x), np.asarray(alpha)
    exact = x.dtype == object and alpha.dtype == object
    if not exact:
        x, alpha = as_float(x), as_float(alpha)
    comps = wedge(x, alpha).components / (x @ x)
    return DualBivectorClass(x, DualBivector(x.shape[0], comps))


def velocity_lift(p, q, geometry: Geometry | str = Geometry.EUCLIDEAN) -> DualBivectorClass:
    """Projective velocity of the velocity ``q`` at ``p``.

    Euclidean ``p`` has d coordinates and the class is based at ``(1, p)``;
    hyperbolic and spherical ``p`` and ``q`` are ambient vectors.
    """
    geometry = Geometry(geometry)
    p, q = np.asarray(p), np.asarray(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"point {p.shape} and velocity {q.shape} differ in shape")
    exact = p.dtype == object and q.dtype == object
    if not exact:
        p, q = as_float(p), as_float(q)
    if geometry is Geometry.EUCLIDEAN:
        x = homogenize(p)
        alpha = np.concatenate([np.array([-(p @ q)], dtype=x.dtype), q])
    else:
        x = p
        alpha = _sharp_diag(geometry, p.shape[0], exact) * q
    return lift_covector(x, alpha)


def velocity_drop(p, tau: DualBivectorClass, geometry: Geometry | str = Geometry.EUCLIDEAN) -> np.ndarray:
    """Inverse of :func:`velocity_lift` at the point ``p``."""
    geometry = Geometry(geometry)
    p = np.asarray(p)
    x = homogenize(p) if geometry is Geometry.EUCLIDEAN else p
    if x.shape[0] != tau.rep.dim:
        raise DimensionMismatch("point and class live in different dimensions")
    if not _proportional(x, tau.base):
        raise BasePointMismatch("class is based at a different point")
    alpha = contract(x, tau.rep)
    if geometry is Geometry.EUCLIDEAN:
        return alpha[1:]
    return _sharp_diag(geometry, x.shape[0], alpha.dtype == object) * alpha


def projective_motion_check(X: ProjectiveFramework, taus, tol: Tolerance = FLOATING) -> bool:
    """True iff ``<x_i ^ x_j, t_i - t_j> = 0`` on every edge."""
    taus = list(taus)
    if len(taus) != X.points.shape[0]:
        raise DimensionMismatch("one velocity class per vertex is required")
    for i, t in enumerate(taus):
        if not _proportional(X.points[i], t.base, tol):
            raise BasePointMismatch(f"class {i} is not based at vertex {i}")
    exact = tol.exact or (X.is_exact and all(t.rep.components.dtype == object for t in taus))
    for i, j in X.edges:
        xi, xj = X.points[i], X.points[j]
        if not exact:
            xi, xj = as_float(xi), as_float(xj)
        b = wedge(xi, xj)
        diff = taus[i].rep - taus[j].rep
        val = pairing(b, diff)
        if exact:
            if val != 0:
                return False
        else:
            scale = b.norm() * (taus[i].rep.norm() + taus[j].rep.norm())
            if abs(float(val)) > 1e-9 * max(scale, 1e-300):
                return False
    return True


# -- force systems ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ForceReduction:
    total: Bivector
    kind: str  # "zero" | "single_force" | "couple"
    point: np.ndarray | None = None
    force: np.ndarray | None = None


def reduce_force_system(forces, tol: Tolerance = FLOATING) -> ForceReduction:
    """Total bivector of ``[(p, f), ...]`` and what it reduces to."""
    forces = [(np.asarray(p), np.asarray(f)) for p, f in forces]
    if not forces:
        raise DimensionMismatch("empty force system")
    d = forces[0][0].shape[0]
    exact = all(p.dtype == object and f.dtype == object for p, f in forces) or (
        tol.exact and all(p.dtype != np.float64 and f.dtype != np.float64 for p, f in forces)
    )
    total = None
    scale = 0.0
    for p, f in forces:
        if p.shape != (d,) or f.shape != (d,):
            raise DimensionMismatch("force system mixes dimensions")
        if exact:
            p, f = as_exact(p), as_exact(f)
            zero = Fraction(0)
        else:
            p, f = as_float(p), as_float(f)
            zero = 0.0
            scale += float(np.sqrt(1 + p @ p) * np.linalg.norm(f))
        b = wedge(homogenize(p), np.concatenate([np.array([zero], dtype=p.dtype), f]))
        total = b if total is None else total + b
    atol = 0.0 if exact else 1e-9 * scale
    if total.is_zero(atol):
        return ForceReduction(total, "zero")
    T = total.matrix()
    force = T[0, 1:]
    force_zero = all(v == 0 for v in force) if exact else float(np.linalg.norm(force)) <= atol
    if force_zero:
        return ForceReduction(total, "couple")
    if not is_decomposable(total, EXACT if exact else tol):
        raise NonDecomposable(total)
    spatial = T[1:, 1:]
    point = spatial.dot(force) / (force @ force)
    return ForceReduction(total, "single_force", point=point, force=force)
