"""Deterministic example frameworks and the four-plane test for octahedra.

Every generator returns a :class:`Framework` whose metadata carries a
``provenance`` block (generator id, parameters, and ``approximate`` when the
coordinates are rounded irrationals).  Octahedra also carry a ``coloring``
of their eight faces into two classes of four.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Mapping

import numpy as np

from .errors import ImproperColoring, InvalidParameters, NotOctahedral
from .framework import Framework, Geometry
from .linalg import EXACT, FLOATING, Tolerance, as_exact, rank, rank_nullspace

__all__ = [
    "ExampleSpec",
    "EXAMPLE_IDS",
    "make_example",
    "simplex",
    "cycle",
    "twisted_octahedron",
    "liebmann_octahedron",
    "desargues",
    "bipartite_quadric",
    "radial_flex",
    "octahedron_faces",
    "blaschke_check",
]

EXAMPLE_IDS = ("simplex", "cycle", "twisted_octahedron", "liebmann_octahedron", "desargues", "bipartite_quadric")


@dataclass(frozen=True)
class ExampleSpec:
    id: str
    parameters: Mapping[str, Any] = field(default_factory=dict)


def _frac(v, name):
    if isinstance(v, bool):
        raise InvalidParameters(f"{name} must be a number")
    try:
        return Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10**12)
    except (TypeError, ValueError) as exc:
        raise InvalidParameters(f"{name} must be a number, got {v!r}") from exc


def _int(v, name, lo):
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < lo:
        raise InvalidParameters(f"{name} must be an integer >= {lo}, got {v!r}")
    return int(v)


def _provenance(example, approximate=False, **params) -> dict:
    return {"provenance": {"example": example, "parameters": params, "approximate": approximate}}


def _exact(rows) -> np.ndarray:
    return as_exact(np.array(rows, dtype=object))


# -- calibration frameworks --------------------------------------------------------

def simplex(d: int = 2) -> Framework:
    """The origin and the unit vectors, all pairs joined."""
    d = _int(d, "d", 1)
    pts = [[0] * d] + [[int(i == j) for j in range(d)] for i in range(d)]
    edges = list(combinations(range(d + 1), 2))
    return Framework(d, Geometry.EUCLIDEAN, _exact(pts), edges, metadata=_provenance("simplex", d=d))


def _circle_point(t: Fraction) -> list[Fraction]:
    """Rational point on the unit circle (t = infinity gives (-1, 0))."""
    if t is None:
        return [Fraction(-1), Fraction(0)]
    return [(1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)]


def _sphere_point(u: Fraction, v: Fraction) -> list[Fraction]:
    s = 1 + u * u + v * v
    return [2 * u / s, 2 * v / s, (u * u + v * v - 1) / s]


def cycle(n: int = 4) -> Framework:
    """An n-gon: the unit square for n = 4, rational points of the unit circle otherwise."""
    n = _int(n, "n", 3)
    if n == 4:
        pts = [[0, 0], [1, 0], [1, 1], [0, 1]]
    else:
        # t = tan(theta / 2) on an increasing grid keeps the polygon convex
        ts = [Fraction(2 * k - n, n) * 3 for k in range(n)]
        pts = [_circle_point(t) for t in ts]
    edges = [(k, (k + 1) % n) for k in range(n)]
    return Framework(2, Geometry.EUCLIDEAN, _exact(pts), edges, metadata=_provenance("cycle", n=n))


# -- octahedra ---------------------------------------------------------------------

# Vertex order: bottom b0 b1 b2, top t0 t1 t2.
_ANTIPRISM_EDGES = (
    [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    + [(3 + k, k) for k in range(3)]
    + [(3 + k, (k + 1) % 3) for k in range(3)]
)
_ANTIPRISM_COLORING = {
    "black": [[3, 4, 5]] + [[3 + k, k, (k + 1) % 3] for k in range(3)],
    "white": [[0, 1, 2]] + [[3 + k, 3 + (k + 1) % 3, (k + 1) % 3] for k in range(3)],
}


def twisted_octahedron(r=1, h=1, twist=90) -> Framework:
    """Straight antiprism over a regular triangle with its top base turned by ``twist`` degrees.

    ``twist = 0`` is the straight antiprism, a regular octahedron when
    ``h = r * sqrt(2)``; the bars stay those of the antiprism for every twist.
    Coordinates are floats, flagged approximate.
    """
    r, h, tw = float(_frac(r, "r")), float(_frac(h, "h")), float(_frac(twist, "twist"))
    if r <= 0 or h <= 0:
        raise InvalidParameters("r and h must be positive")
    if not -120 < tw < 120:
        raise InvalidParameters("twist must lie strictly between -120 and 120 degrees")
    bottom = [120.0 * k for k in range(3)]
    top = [60.0 + tw + 120.0 * k for k in range(3)]
    pts = [[r * np.cos(np.radians(a)), r * np.sin(np.radians(a)), 0.0] for a in bottom]
    pts += [[r * np.cos(np.radians(a)), r * np.sin(np.radians(a)), h] for a in top]
    meta = _provenance("twisted_octahedron", approximate=True, r=r, h=h, twist=tw)
    meta["coloring"] = {k: [list(f) for f in v] for k, v in _ANTIPRISM_COLORING.items()}
    return Framework(3, Geometry.EUCLIDEAN, np.array(pts), _ANTIPRISM_EDGES, metadata=meta)


def _plane_through(*pts) -> np.ndarray:
    """Normal (a, b, c, e) with ``e + a x + b y + c z = 0`` through the given points."""
    m = _exact([[1, *p] for p in pts])
    _, ker = rank_nullspace(m, EXACT)
    if ker.shape[0] != 1:
        raise InvalidParameters("points do not span a plane")
    return ker[0]


def _line_point(p1, p2, anchor, s):
    """``anchor + s * dir`` where dir spans the intersection of two planes through the anchor."""
    n1, n2 = p1[1:], p2[1:]
    direction = np.array([n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2], n1[0] * n2[1] - n1[1] * n2[0]])
    if all(v == 0 for v in direction):
        raise InvalidParameters("planes are parallel")
    return anchor + s * direction


def liebmann_octahedron(apex=(1, 1, 4), s1=Fraction(-1, 6), s2=Fraction(1, 5)) -> Framework:
    """Octahedron whose four black face planes pass through ``apex``.

    Opposite pairs are (u1, u2), (v1, v2), (w1, w2); black faces are
    u1 v1 w2, u1 v2 w1, u2 v1 w1, u2 v2 w2.  The u and v vertices are fixed and
    w1, w2 are placed on the lines where pairs of planes through ``apex`` meet,
    at parameters ``s1`` and ``s2``.  All coordinates are rational.
    """
    O = _exact(list(apex))
    if O.shape != (3,):
        raise InvalidParameters("apex must be a point of R^3")
    u1, u2 = _exact([0, 0, 2]), _exact([0, 0, -2])
    v1, v2 = _exact([2, 1, 0]), _exact([-2, 1, 0])
    w2 = _line_point(_plane_through(u1, O, v1), _plane_through(u2, O, v2), O, _frac(s2, "s2"))
    w1 = _line_point(_plane_through(u1, O, v2), _plane_through(u2, O, v1), O, _frac(s1, "s1"))
    pts = np.array([u1, u2, v1, v2, w1, w2], dtype=object)
    U1, U2, V1, V2, W1, W2 = range(6)
    opposite = {(U1, U2), (V1, V2), (W1, W2)}
    edges = [e for e in combinations(range(6), 2) if e not in opposite]
    coloring = {
        "black": [[U1, V1, W2], [U1, V2, W1], [U2, V1, W1], [U2, V2, W2]],
        "white": [[U1, V1, W1], [U1, V2, W2], [U2, V1, W2], [U2, V2, W1]],
    }
    meta = _provenance("liebmann_octahedron", apex=[str(v) for v in O], s1=str(s1), s2=str(s2))
    meta["coloring"] = coloring
    try:
        return Framework(3, Geometry.EUCLIDEAN, pts, edges, labels=["u1", "u2", "v1", "v2", "w1", "w2"], metadata=meta)
    except ValueError as exc:
        raise InvalidParameters(f"degenerate Liebmann octahedron: {exc}") from exc


# -- planar prism ------------------------------------------------------------------

_DESARGUES_OUTER = [[0, 0], [4, 0], [1, 3]]
_DESARGUES_CENTER = [Fraction(5, 3), Fraction(1)]
_DESARGUES_PERTURBATION = [Fraction(1, 7), Fraction(-1, 11)]


def desargues(concurrent: bool = True, parallel: bool = False, ratio=Fraction(1, 2)) -> Framework:
    """Triangular prism graph in the plane: outer triangle, inner triangle, three struts.

    ``concurrent`` places the inner triangle by a central similarity of the
    outer one, so the three struts lie on lines through a common point;
    ``parallel`` uses a translation instead (lines meet at infinity).
    Otherwise one inner vertex is moved off that position.
    """
    ratio = _frac(ratio, "ratio")
    if ratio in (0, 1):
        raise InvalidParameters("ratio must differ from 0 and 1")
    outer = _exact(_DESARGUES_OUTER)
    if parallel:
        inner = outer + _exact([Fraction(1, 2), Fraction(5, 2)])
    else:
        c = _exact(_DESARGUES_CENTER)
        inner = c + ratio * (outer - c)
    inner = inner.copy()
    if not concurrent:
        inner[0] = inner[0] + _exact(_DESARGUES_PERTURBATION)
    pts = np.concatenate([outer, inner])
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    meta = _provenance("desargues", concurrent=bool(concurrent), parallel=bool(parallel), ratio=str(ratio))
    return Framework(2, Geometry.EUCLIDEAN, pts, edges, metadata=meta)


# -- bipartite frameworks on a quadric -----------------------------------------------

def _circle_params(count, offset):
    return [Fraction(2 * k + offset, 3) - 2 for k in range(count)]


def bipartite_quadric(m: int = 3, n: int = 3, axes=None) -> Framework:
    """Complete bipartite K_{m,n} on the ellipse/ellipsoid with semi-axes ``axes``.

    The dimension is ``len(axes)`` (2 or 3, default the unit circle).  White
    vertices come first.  Points are rational.
    """
    m, n = _int(m, "m", 1), _int(n, "n", 1)
    axes = [Fraction(1), Fraction(1)] if axes is None else [_frac(a, "axis") for a in axes]
    if len(axes) not in (2, 3) or any(a <= 0 for a in axes):
        raise InvalidParameters("axes must be 2 or 3 positive numbers")
    d = len(axes)
    if d == 2:
        pts = [_circle_point(t) for t in _circle_params(m, 0)] + [_circle_point(t) for t in _circle_params(n, 1)]
    else:
        white = [_sphere_point(Fraction(k, 2), Fraction(k * k - 1, 3)) for k in range(m)]
        black = [_sphere_point(Fraction(-k - 1, 3), Fraction(k + 1, 2)) for k in range(n)]
        pts = white + black
    pts = [[a * x for a, x in zip(axes, p)] for p in pts]
    edges = [(i, m + j) for i in range(m) for j in range(n)]
    meta = _provenance("bipartite_quadric", m=m, n=n, axes=[str(a) for a in axes])
    meta["bipartition"] = {"white": list(range(m)), "black": list(range(m, m + n))}
    return Framework(d, Geometry.EUCLIDEAN, _exact(pts), edges, metadata=meta)


def radial_flex(fw: Framework) -> np.ndarray:
    """White vertices move along ``-A p``, black along ``+A p`` (``A = diag(axes^-2)``).

    For points on ``p^T A p = 1`` every white-black bar keeps its length to
    first order.
    """
    meta = fw.metadata.get("provenance", {})
    part = fw.metadata.get("bipartition")
    if meta.get("example") != "bipartite_quadric" or part is None:
        raise InvalidParameters("radial_flex needs a bipartite_quadric framework")
    axes = [Fraction(a) for a in meta["parameters"]["axes"]]
    A = np.array([1 / (a * a) for a in axes], dtype=object)
    q = fw.points * A
    q[part["white"]] = -q[part["white"]]
    return q


# -- Blaschke four-plane test ----------------------------------------------------------

def octahedron_faces(fw: Framework) -> list[tuple[int, int, int]]:
    """The eight triangles of an octahedral graph; raises :class:`NotOctahedral`."""
    n = fw.n_vertices
    edges = set(fw.edges)
    if n != 6 or len(edges) != 12:
        raise NotOctahedral("an octahedron has 6 vertices and 12 edges")
    missing = [e for e in combinations(range(6), 2) if e not in edges]
    if len({v for e in missing for v in e}) != 6:
        raise NotOctahedral("non-edges must pair up opposite vertices")
    faces = [t for t in combinations(range(6), 3) if all(e in edges for e in combinations(t, 2))]
    if len(faces) != 8:
        raise NotOctahedral("graph does not have the eight triangles of an octahedron")
    return faces


def _check_coloring(faces, coloring) -> tuple[list, list]:
    try:
        black = [tuple(sorted(int(v) for v in f)) for f in coloring["black"]]
        white = [tuple(sorted(int(v) for v in f)) for f in coloring["white"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ImproperColoring("coloring needs 'black' and 'white' lists of triangles") from exc
    if len(black) != 4 or len(white) != 4 or sorted(black + white) != sorted(faces):
        raise ImproperColoring("the two classes must split the eight faces four and four")
    for cls in (black, white):
        for f, g in combinations(cls, 2):
            if len(set(f) & set(g)) == 2:
                raise ImproperColoring(f"faces {f} and {g} share an edge but have the same color")
    return black, white


def blaschke_check(fw: Framework, coloring=None, color: str = "black", tol: Tolerance | None = None) -> bool:
    """True iff the planes of the four faces of ``color`` share a point, possibly at infinity."""
    if fw.geometry is not Geometry.EUCLIDEAN or fw.dimension != 3:
        raise NotOctahedral("the four-plane test is for octahedra in Euclidean 3-space")
    faces = octahedron_faces(fw)
    coloring = fw.metadata.get("coloring") if coloring is None else coloring
    if coloring is None:
        raise ImproperColoring("no face coloring given")
    black, white = _check_coloring(faces, coloring)
    chosen = black if color == "black" else white
    tol = tol or (EXACT if fw.is_exact else FLOATING)
    if tol.exact:
        planes = np.array([_plane_through(*(fw.points[v] for v in f)) for f in chosen], dtype=object)
        return rank(planes, EXACT) <= 3
    pts = fw.float_points()
    rows = []
    for f in chosen:
        m = np.array([[1.0, *pts[v]] for v in f])
        _, _, vt = np.linalg.svd(m)
        rows.append(vt[-1] / np.linalg.norm(vt[-1]))
    return rank(np.array(rows), tol) <= 3


# -- dispatch --------------------------------------------------------------------

_GENERATORS = {
    "simplex": simplex,
    "cycle": cycle,
    "twisted_octahedron": twisted_octahedron,
    "liebmann_octahedron": liebmann_octahedron,
    "desargues": desargues,
    "bipartite_quadric": bipartite_quadric,
}


def make_example(spec: ExampleSpec | str, **parameters) -> Framework:
    if isinstance(spec, str):
        spec = ExampleSpec(spec, parameters)
    gen = _GENERATORS.get(spec.id)
    if gen is None:
        raise InvalidParameters(f"unknown example {spec.id!r}; choose from {', '.join(EXAMPLE_IDS)}")
    try:
        return gen(**dict(spec.parameters))
    except TypeError as exc:
        raise InvalidParameters(f"bad parameters for {spec.id}: {exc}") from exc
