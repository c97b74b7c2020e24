"""Frameworks in Euclidean, hyperbolic and spherical space, and their JSON form.

Coordinates are stored either exactly (numpy object arrays of Fractions) or
as float64.  Integers, Fractions, decimal JSON numbers and ``"p/q"`` strings
give exact coordinates; any Python/numpy float makes the whole framework
floating, since a float usually stands for an irrational value (a square root
from a central projection, a cosine from the catalog).
"""
from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import (
    CoincidentEdgeEndpoints,
    DimensionMismatch,
    NonFiniteEntry,
    NonPositiveSheet,
    OffSurfaceVertex,
    SchemaError,
    TangencyViolation,
)
from .linalg import FLOATING, Tolerance, as_float, rank

__all__ = [
    "Geometry",
    "Framework",
    "ProjectiveFramework",
    "Stress",
    "SURFACE_TOL",
    "coerce_numbers",
    "parse_framework",
    "load_framework",
    "framework_to_dict",
    "dumps",
    "parse_field",
    "field_to_dict",
    "parse_stress",
    "stress_to_dict",
    "affine_span_dim",
    "lift_to_projective",
    "check_field",
    "metric_diagonal",
]

SURFACE_TOL = 1e-9


class Geometry(str, Enum):
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    SPHERICAL = "spherical"

    @property
    def ambient(self) -> bool:
        return self is not Geometry.EUCLIDEAN


def metric_diagonal(geometry: Geometry, n: int, exact: bool = False) -> np.ndarray:
    """Diagonal of the bilinear form on R^n used by a geometry."""
    g = [1] * n
    if geometry is Geometry.HYPERBOLIC:
        g = [1] + [-1] * (n - 1)
    if exact:
        return np.array([Fraction(v) for v in g], dtype=object)
    return np.array(g, dtype=np.float64)


def _exact_scalar(v):
    if isinstance(v, (bool, np.bool_)):
        raise SchemaError(f"boolean {v!r} is not a coordinate")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"cannot parse number {v!r}") from exc
    if isinstance(v, numbers.Rational):
        return Fraction(v.numerator, v.denominator)
    return None


def coerce_numbers(values, shape_hint: str = "array") -> np.ndarray:
    """Exact object array when every entry is rational, float64 otherwise."""
    arr = np.asarray(values, dtype=object)
    exact = np.empty(arr.shape, dtype=object)
    all_exact = True
    for idx, v in np.ndenumerate(arr):
        e = _exact_scalar(v)
        if e is None:
            all_exact = False
            break
        exact[idx] = e
    if all_exact:
        return exact
    try:
        out = np.array(arr.tolist(), dtype=np.float64) if arr.size else np.zeros(arr.shape)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{shape_hint} contains non-numeric entries") from exc
    if not np.all(np.isfinite(out)):
        raise NonFiniteEntry(f"{shape_hint} contains NaN or infinite entries")
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Framework:
    """A graph drawn with straight bars.

    Euclidean vertices carry ``dimension`` coordinates; hyperbolic and
    spherical vertices carry ``dimension + 1`` ambient coordinates, index 0
    first.  Edges are stored as ``(i, j)`` with ``i < j`` in input order.
    """

    dimension: int
    geometry: Geometry
    points: np.ndarray
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        d = self.dimension
        if not isinstance(d, numbers.Integral) or isinstance(d, bool) or d < 1:
            raise SchemaError(f"dimension must be a positive integer, got {d!r}")
        geometry = Geometry(self.geometry)
        object.__setattr__(self, "geometry", geometry)
        pts = self.points
        if not isinstance(pts, np.ndarray) or pts.dtype not in (np.float64, object):
            pts = coerce_numbers(pts, "vertices")
        if pts.dtype == np.float64 and not np.all(np.isfinite(pts)):
            raise NonFiniteEntry("vertex coordinates contain NaN or infinite entries")
        width = d + 1 if geometry.ambient else d
        if pts.size == 0:
            pts = pts.reshape(0, width)
        if pts.ndim != 2 or pts.shape[1] != width:
            raise SchemaError(f"each {geometry.value} vertex needs {width} coordinates")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "edges", self._check_edges(self.edges, pts.shape[0]))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != pts.shape[0]:
                raise SchemaError("labels must have one entry per vertex")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "metadata", dict(self.metadata))
        self._check_surface()

    @staticmethod
    def _check_edges(edges, n) -> tuple[tuple[int, int], ...]:
        out = []
        seen = set()
        for e in edges:
            try:
                i, j = e
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"edge {e!r} is not a pair") from exc
            if not all(isinstance(v, numbers.Integral) and not isinstance(v, bool) for v in (i, j)):
                raise SchemaError(f"edge {e!r} has non-integer indices")
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise SchemaError(f"edge {(i, j)} refers to a missing vertex")
            if i == j:
                raise SchemaError(f"edge {(i, j)} is a self-loop")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise SchemaError(f"duplicate edge {key}")
            seen.add(key)
            out.append(key)
        return tuple(out)

    def _check_surface(self):
        pts = self.points
        for i, j in self.edges:
            if all(a == b for a, b in zip(pts[i], pts[j])):
                raise CoincidentEdgeEndpoints((i, j))
        if self.geometry is Geometry.EUCLIDEAN:
            return
        g = metric_diagonal(self.geometry, self.dimension + 1)
        for i, x in enumerate(pts):
            if self.geometry is Geometry.HYPERBOLIC and not x[0] > 0:
                raise NonPositiveSheet(i)
            xf = as_float(x)
            residual = abs(float(np.sum(g * xf * xf)) - 1.0)
            if residual > SURFACE_TOL:
                raise OffSurfaceVertex(i, residual)

    # -- convenience -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.points.shape[0]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def is_exact(self) -> bool:
        return self.points.dtype == object

    @property
    def ambient_dim(self) -> int:
        """Number of coordinates per vertex."""
        return self.points.shape[1]

    def float_points(self) -> np.ndarray:
        return as_float(self.points)

    def replace(self, **changes) -> "Framework":
        kw = dict(
            dimension=self.dimension,
            geometry=self.geometry,
            points=self.points,
            edges=self.edges,
            labels=self.labels,
            metadata=self.metadata,
        )
        kw.update(changes)
        return Framework(**kw)

    def same_as(self, other: "Framework") -> bool:
        """Structural equality (coordinates compared by value)."""
        return (
            self.dimension == other.dimension
            and self.geometry is other.geometry
            and self.edges == other.edges
            and self.labels == other.labels
            and self.points.shape == other.points.shape
            and all(a == b for a, b in zip(self.points.ravel(), other.points.ravel()))
        )


@dataclass(frozen=True, eq=False)
class ProjectiveFramework:
    dimension: int
    points: np.ndarray  # representatives in R^(d+1), one row per vertex
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = self.points
        if not isinstance(pts, np.ndarray) or pts.dtype not in (np.float64, object):
            pts = coerce_numbers(pts, "representatives")
        if pts.ndim != 2 or pts.shape[1] != self.dimension + 1:
            raise SchemaError(f"representatives need {self.dimension + 1} coordinates")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "edges", Framework._check_edges(self.edges, pts.shape[0]))
        tol = Tolerance("exact") if pts.dtype == object else FLOATING
        for i, x in enumerate(pts):
            if all(v == 0 for v in x):
                raise SchemaError(f"representative {i} is the zero vector")
        for i, j in self.edges:
            if rank(np.array([pts[i], pts[j]]), tol) < 2:
                raise CoincidentEdgeEndpoints((i, j))

    @property
    def is_exact(self) -> bool:
        return self.points.dtype == object


class Stress:
    """Per-edge scalars, symmetric in the edge and zero off the edge set."""

    def __init__(self, edges: Sequence[tuple[int, int]], values):
        self.edges = tuple((min(i, j), max(i, j)) for i, j in edges)
        self.values = np.asarray(values)
        if self.values.shape != (len(self.edges),):
            raise DimensionMismatch("one stress value per edge is required")
        self._index = {e: k for k, e in enumerate(self.edges)}

    def __getitem__(self, ij):
        i, j = ij
        k = self._index.get((min(i, j), max(i, j)))
        return 0 if k is None else self.values[k]

    def __repr__(self):
        return f"Stress({dict(zip(self.edges, self.values.tolist()))})"


# -- JSON --------------------------------------------------------------------

def _load_json(document):
    if isinstance(document, Mapping):
        return document
    if isinstance(document, (bytes, bytearray)):
        document = document.decode("utf-8")
    try:
        return json.loads(document, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def parse_framework(document) -> Framework:
    """Build a validated :class:`Framework` from JSON text or a decoded mapping."""
    doc = _load_json(document)
    if not isinstance(doc, Mapping):
        raise SchemaError("framework document must be a JSON object")
    missing = [k for k in ("dimension", "geometry", "vertices", "edges") if k not in doc]
    if missing:
        raise SchemaError(f"framework document lacks {', '.join(missing)}")
    try:
        geometry = Geometry(doc["geometry"])
    except ValueError as exc:
        raise SchemaError(f"unknown geometry {doc['geometry']!r}") from exc
    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, list) for v in vertices):
        raise SchemaError("vertices must be a list of coordinate lists")
    widths = {len(v) for v in vertices}
    if len(widths) > 1:
        raise SchemaError("vertices have inconsistent coordinate counts")
    if not isinstance(doc["edges"], list):
        raise SchemaError("edges must be a list of index pairs")
    metadata = {k: doc[k] for k in ("provenance", "coloring") if k in doc}
    return Framework(
        dimension=doc["dimension"],
        geometry=geometry,
        points=coerce_numbers(vertices, "vertices") if vertices else np.zeros((0, 0)),
        edges=[tuple(e) if isinstance(e, list) else e for e in doc["edges"]],
        labels=doc.get("labels"),
        metadata=metadata,
    )


def load_framework(path) -> Framework:
    return parse_framework(Path(path).read_text(encoding="utf-8"))


def json_number(v):
    """JSON-safe form of a coordinate that parses back to the same value."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v.numerator)
        f = float(v)
        if Fraction(repr(f)) == v:
            return f
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (numbers.Integral,)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        raise NonFiniteEntry(f"cannot serialize {v!r}")
    return v


def _rows(a: np.ndarray) -> list:
    return [[json_number(v) for v in row] for row in a]


def framework_to_dict(fw: Framework) -> dict:
    doc = {
        "dimension": fw.dimension,
        "geometry": fw.geometry.value,
        "vertices": _rows(fw.points),
        "edges": [list(e) for e in fw.edges],
    }
    if fw.labels is not None:
        doc["labels"] = list(fw.labels)
    for key in ("coloring", "provenance"):
        if key in fw.metadata:
            doc[key] = fw.metadata[key]
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def parse_field(document, fw: Framework | None = None) -> np.ndarray:
    """Velocity or load file ``{"field": [[...], ...]}`` as an (n, k) array."""
    doc = _load_json(document)
    if not isinstance(doc, Mapping) or "field" not in doc:
        raise SchemaError("field document must be an object with a 'field' key")
    rows = doc["field"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("field must be a list of vectors")
    arr = coerce_numbers(rows, "field")
    if fw is not None and arr.shape != fw.points.shape:
        raise DimensionMismatch(f"field has shape {arr.shape}, framework points {fw.points.shape}")
    return arr


def field_to_dict(q) -> dict:
    return {"field": _rows(np.asarray(q))}


def parse_stress(document, fw: Framework) -> Stress:
    doc = _load_json(document)
    if not isinstance(doc, Mapping) or "stress" not in doc:
        raise SchemaError("stress document must be an object with a 'stress' key")
    values = {}
    for entry in doc["stress"]:
        if not isinstance(entry, list) or len(entry) != 3:
            raise SchemaError("stress entries are [i, j, value]")
        i, j, v = entry
        key = (min(i, j), max(i, j))
        if key not in fw.edges:
            raise SchemaError(f"stress on {key}, which is not an edge")
        values[key] = v
    vals = coerce_numbers([values.get(e, 0) for e in fw.edges], "stress")
    return Stress(fw.edges, vals)


def stress_to_dict(s: Stress) -> dict:
    return {"stress": [[i, j, json_number(v)] for (i, j), v in zip(s.edges, s.values)]}


# -- geometry helpers ----------------------------------------------------------

def affine_span_dim(fw: Framework, tol: Tolerance = FLOATING) -> int:
    """Dimension of the affine hull of the vertices (linear span for ambient models)."""
    pts = fw.points
    if fw.n_vertices == 0:
        return -1
    if fw.geometry.ambient:
        # points on the quadric span a linear subspace; its projective dimension
        return rank(pts, tol) - 1
    if fw.n_vertices == 1:
        return 0
    return rank(pts[1:] - pts[0], tol)


def homogenize(p) -> np.ndarray:
    p = np.asarray(p)
    one = Fraction(1) if p.dtype == object else 1.0
    return np.concatenate([np.array([one], dtype=p.dtype), p])


def lift_to_projective(fw: Framework) -> ProjectiveFramework:
    if fw.geometry.ambient:
        reps = fw.points
    else:
        one = np.full((fw.n_vertices, 1), Fraction(1) if fw.is_exact else 1.0, dtype=fw.points.dtype)
        reps = np.concatenate([one, fw.points], axis=1)
    return ProjectiveFramework(fw.dimension, reps, fw.edges)


def check_field(fw: Framework, q, tol: float = SURFACE_TOL) -> np.ndarray:
    """Validate a velocity field's shape and, for ambient models, tangency."""
    q = np.asarray(q)
    if q.shape != fw.points.shape:
        raise DimensionMismatch(f"field has shape {q.shape}, framework points {fw.points.shape}")
    if fw.geometry.ambient:
        g = metric_diagonal(fw.geometry, fw.ambient_dim)
        pts = fw.float_points()
        qf = as_float(q)
        scale = np.maximum(1.0, np.linalg.norm(qf, axis=1))
        res = np.abs(np.sum(g * pts * qf, axis=1)) / scale
        bad = np.flatnonzero(res > tol)
        if bad.size:
            raise TangencyViolation(int(bad[0]), float(res[bad[0]]))
    return q
