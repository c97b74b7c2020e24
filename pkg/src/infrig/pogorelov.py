"""Central projection to the hyperboloid and the sphere, and velocity transport.

The tangent point is ``c = (1, 0, ..., 0)``: a Euclidean point ``p`` sits at
``(1, p)`` in R^(d+1) and is projected from the origin onto
``{-x0^2 + |x|^2 = -1, x0 > 0}`` or onto the unit sphere.

Velocities move between geometries through the projective velocity class
shared by all three models (lift in one, drop in the other).  The explicit
formulas below serve as an independent check of that pipeline:

* hyperbolic: ``w = q / sqrt(1 - |p|^2)``, ``q_H = (p . w, w)``
* spherical:  ``w = q / sqrt(1 + |p|^2)``, ``q_S = (-p . w, w)``
"""
from __future__ import annotations

from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, OutsideDisk
from .framework import Framework, Geometry, check_field, homogenize
from .linalg import as_float
from .projective import velocity_drop, velocity_lift

__all__ = [
    "Direction",
    "central_project",
    "fit_disk",
    "pogorelov_transport",
    "closed_form_transport",
]


class Direction(str, Enum):
    TO_HYPERBOLIC = "to_hyperbolic"
    FROM_HYPERBOLIC = "from_hyperbolic"
    TO_SPHERICAL = "to_spherical"
    FROM_SPHERICAL = "from_spherical"

    @property
    def target(self) -> Geometry:
        return Geometry.HYPERBOLIC if "hyperbolic" in self.value else Geometry.SPHERICAL

    @property
    def forward(self) -> bool:
        return self.value.startswith("to_")


def _euclidean(fw: Framework) -> None:
    if fw.geometry is not Geometry.EUCLIDEAN:
        raise ValueError("central projection starts from a Euclidean framework")


def _check_disk(fw: Framework) -> None:
    for i, p in enumerate(fw.points):
        if not (p @ p) < 1:
            raise OutsideDisk(i)


def central_project(fw: Framework, target: Geometry | str) -> Framework:
    """Radial projection of ``(1, p)`` onto the hyperboloid or the unit sphere."""
    _euclidean(fw)
    target = Geometry(target)
    if target is Geometry.EUCLIDEAN:
        raise ValueError("target must be hyperbolic or spherical")
    if target is Geometry.HYPERBOLIC:
        _check_disk(fw)
    pts = fw.float_points()
    r2 = np.sum(pts * pts, axis=1)
    scale = np.sqrt(1.0 - r2 if target is Geometry.HYPERBOLIC else 1.0 + r2)
    hom = np.concatenate([np.ones((fw.n_vertices, 1)), pts], axis=1) / scale[:, None]
    meta = dict(fw.metadata)
    meta["provenance"] = {**dict(meta.get("provenance", {})), "central_projection": target.value}
    return fw.replace(geometry=target, points=hom, metadata=meta)


def fit_disk(fw: Framework, radius=Fraction(9, 10)) -> Framework:
    """Scale about the origin so every vertex has norm at most ``radius``.

    The factor is ``radius / max_i |p_i|_1``, which stays rational for exact
    input and bounds the Euclidean norm since ``|p|_2 <= |p|_1``.  Scaling is
    affine, so rigidity and the degrees of freedom are unchanged.
    """
    _euclidean(fw)
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    pts = fw.points
    l1 = max((sum(abs(v) for v in p) for p in pts), default=0)
    if l1 == 0:
        return fw
    if fw.is_exact and not isinstance(radius, float):
        factor = Fraction(radius) / l1
    else:
        factor = float(radius) / float(l1)
        pts = fw.float_points()
    return fw.replace(points=pts * factor)


def _ambient_scale(p: np.ndarray, target: Geometry) -> float:
    r2 = float(p @ p)
    return float(np.sqrt(1.0 - r2 if target is Geometry.HYPERBOLIC else 1.0 + r2))


def pogorelov_transport(fw: Framework, field, direction: Direction | str) -> np.ndarray:
    """Transport a velocity field between ``fw`` and its central projection.

    ``to_*`` takes an (n, d) Euclidean field to an (n, d+1) tangent field on
    ``central_project(fw, target)``; ``from_*`` goes back.
    """
    _euclidean(fw)
    direction = Direction(direction)
    target = direction.target
    if target is Geometry.HYPERBOLIC:
        _check_disk(fw)
    pts = fw.float_points()
    q = as_float(np.asarray(field))
    if direction.forward:
        if q.shape != pts.shape:
            raise DimensionMismatch(f"field has shape {q.shape}, expected {pts.shape}")
        out = np.empty((fw.n_vertices, fw.dimension + 1))
        for i, (p, v) in enumerate(zip(pts, q)):
            tau = velocity_lift(p, v, Geometry.EUCLIDEAN)
            out[i] = velocity_drop(homogenize(p) / _ambient_scale(p, target), tau, target)
        return out
    image = central_project(fw, target)
    check_field(image, q)
    out = np.empty_like(pts)
    for i, (p, x, v) in enumerate(zip(pts, image.points, q)):
        tau = velocity_lift(x, v, target)
        out[i] = velocity_drop(p, tau, Geometry.EUCLIDEAN)
    return out


def closed_form_transport(fw: Framework, field, direction: Direction | str) -> np.ndarray:
    """Same as :func:`pogorelov_transport`, from the explicit formulas."""
    _euclidean(fw)
    direction = Direction(direction)
    target = direction.target
    if target is Geometry.HYPERBOLIC:
        _check_disk(fw)
    pts = fw.float_points()
    q = as_float(np.asarray(field))
    r2 = np.sum(pts * pts, axis=1)
    sign = 1.0 if target is Geometry.HYPERBOLIC else -1.0
    s = np.sqrt(1.0 - sign * r2)[:, None]
    if direction.forward:
        if q.shape != pts.shape:
            raise DimensionMismatch(f"field has shape {q.shape}, expected {pts.shape}")
        w = q / s
        return np.concatenate([sign * np.sum(pts * w, axis=1)[:, None], w], axis=1)
    check_field(central_project(fw, target), q)
    return s * q[:, 1:]
