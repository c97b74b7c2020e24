"""Seeded random instances and the property checks run by ``infrig verify``.

Trial ``k`` of a run with seed ``s`` draws from ``numpy.random.default_rng([s, k])``,
so each trial is reproducible on its own and reports do not depend on the
order trials are evaluated in.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable

import numpy as np

from .catalog import blaschke_check, liebmann_octahedron, twisted_octahedron
from .errors import InvalidParameters, RigidityError
from .framework import Framework, Geometry, affine_span_dim, dumps, framework_to_dict
from .linalg import EXACT, FLOATING, as_exact, as_float, rank, rank_nullspace
from .pogorelov import central_project, closed_form_transport, fit_disk, pogorelov_transport
from .projective import (
    ProjectiveMap,
    apply_projective,
    h_infinity,
    phi_stat,
    phi_stat_secant,
    projective_map_to_dict,
    transport_motion,
)
from .rigidity import analyze_kinematics, analyze_statics, equilibrium_matrix, rigidity_matrix

__all__ = [
    "PROPERTIES",
    "TWIST_SWEEP",
    "TrialResult",
    "random_framework",
    "random_projective_map",
    "random_affine_map",
    "stat_formula_gap",
    "run_property",
]

TWIST_SWEEP = (50, 60, 70, 80, 90, 100)
H_MIN = 0.1
RESIDUAL_RTOL = 1e-9
POGORELOV_RTOL = 1e-12


@dataclass
class TrialResult:
    index: int
    passed: bool
    detail: dict = field(default_factory=dict)
    instance: dict | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "passed": self.passed, **self.detail}


# -- generators --------------------------------------------------------------------

def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def random_framework(rng: np.random.Generator, d: int | None = None, n: int | None = None) -> Framework:
    """Integer vertices in [-5, 5]^2 or [-3, 3]^3 on a random connected graph.

    Vertices are distinct and affinely span the space; the edge count is
    uniform between a spanning tree and the complete graph.
    """
    d = int(rng.choice([2, 3])) if d is None else d
    box = 5 if d == 2 else 3
    n = int(rng.integers(d + 1, d + 5)) if n is None else n
    while True:
        pts = rng.integers(-box, box + 1, size=(n, d))
        if len({tuple(p) for p in pts}) < n:
            continue
        if rank(np.hstack([np.ones((n, 1)), pts]).astype(float)) < d + 1:
            continue
        break
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[k]), int(order[rng.integers(0, k)])))) for k in range(1, n)}
    rest = [e for e in combinations(range(n), 2) if e not in edges]
    extra = int(rng.integers(0, len(rest) + 1))
    for k in rng.permutation(len(rest))[:extra]:
        edges.add(rest[k])
    points = as_exact(pts.astype(object))
    return Framework(d, Geometry.EUCLIDEAN, points, sorted(edges))


def random_projective_map(rng: np.random.Generator, fw: Framework, affine: bool = False) -> ProjectiveMap:
    """Identity plus small integer perturbations, keeping every vertex at |h| > 0.1."""
    d = fw.dimension
    pts = fw.float_points()
    while True:
        m = np.eye(d + 1, dtype=np.int64) + rng.integers(-1, 2, size=(d + 1, d + 1))
        if affine:
            m[0] = 0
            m[0, 0] = 1
        elif not m[0, 1:].any():
            continue
        det = round(np.linalg.det(m.astype(float)))
        if det == 0:
            continue
        phi = ProjectiveMap(as_exact(m.astype(object)))
        if affine:
            return phi
        if all(abs(h_infinity(phi, p)) > H_MIN for p in pts):
            return phi


def random_affine_map(rng: np.random.Generator, fw: Framework) -> ProjectiveMap:
    return random_projective_map(rng, fw, affine=True)


def stat_formula_gap(rng: np.random.Generator, d: int) -> float | None:
    """Relative gap between the differential and the secant forms at a random probe."""
    m = np.eye(d + 1) + rng.normal(scale=0.5, size=(d + 1, d + 1))
    if abs(np.linalg.det(m)) < 0.1 or np.linalg.norm(m[0, 1:]) < 0.1:
        return None
    phi = ProjectiveMap(m)
    p = rng.uniform(-2, 2, size=d)
    f = rng.uniform(-1, 1, size=d)
    if abs(h_infinity(phi, p)) < H_MIN or abs(h_infinity(phi, p + f)) < H_MIN:
        return None
    a = as_float(phi_stat(phi, p, f))
    b = phi_stat_secant(phi, p, f)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b)))


# -- checks ----------------------------------------------------------------------

def _rel(a, b) -> float:
    a, b = as_float(a), as_float(b)
    den = max(np.linalg.norm(a), np.linalg.norm(b), np.finfo(float).tiny)
    return float(np.linalg.norm(a - b) / den)


def _constraint_residual(fw: Framework, Q, tol=FLOATING) -> float:
    R = as_float(rigidity_matrix(fw, tol).matrix)
    q = as_float(Q).reshape(-1)
    if R.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(R @ q) / max(np.linalg.norm(R) * np.linalg.norm(q), np.finfo(float).tiny))


def _darboux_sauer(rng) -> TrialResult:
    fw = random_framework(rng)
    phi = random_projective_map(rng, fw)
    img = apply_projective(phi, fw)
    k0, k1 = analyze_kinematics(fw, EXACT), analyze_kinematics(img, EXACT)
    moved = [transport_motion(phi, fw, Q) for Q in k0.motion_basis]
    resid = max((_constraint_residual(img, Q, EXACT) for Q in moved), default=0.0)
    independent = not moved or rank(np.array([Q.reshape(-1) for Q in moved]), EXACT) == len(moved)
    gaps = [g for g in (stat_formula_gap(rng, fw.dimension) for _ in range(5)) if g is not None]
    gap = max(gaps, default=0.0)
    ok = k0.dof == k1.dof and resid < RESIDUAL_RTOL and independent and gap < RESIDUAL_RTOL
    detail = {"dof": k0.dof, "dof_image": k1.dof, "residual": resid, "independent": independent, "formula_gap": gap}
    return TrialResult(0, ok, detail, {"framework": framework_to_dict(fw), "map": projective_map_to_dict(phi)})


def _pogorelov(rng) -> TrialResult:
    fw = random_framework(rng)
    dof = analyze_kinematics(fw, EXACT).dof
    dof_s = analyze_kinematics(central_project(fw, Geometry.SPHERICAL)).dof
    small = fit_disk(fw, Fraction(9, 10))
    hyp = central_project(small, Geometry.HYPERBOLIC)
    dof_h = analyze_kinematics(hyp).dof
    basis = analyze_kinematics(small, EXACT).motion_basis
    closed = trip = resid = 0.0
    for Q in basis:
        for target, image in ((Geometry.HYPERBOLIC, hyp), (Geometry.SPHERICAL, central_project(small, Geometry.SPHERICAL))):
            up = pogorelov_transport(small, Q, "to_" + target.value)
            closed = max(closed, _rel(up, closed_form_transport(small, Q, "to_" + target.value)))
            back = pogorelov_transport(small, up, "from_" + target.value)
            trip = max(trip, _rel(back, Q))
            resid = max(resid, _constraint_residual(image, up))
    ok = dof == dof_s == dof_h and closed < POGORELOV_RTOL and trip < POGORELOV_RTOL and resid < RESIDUAL_RTOL
    detail = {"dof": dof, "dof_spherical": dof_s, "dof_hyperbolic": dof_h, "closed_form_gap": closed,
              "round_trip_gap": trip, "residual": resid}
    return TrialResult(0, ok, detail, {"framework": framework_to_dict(fw)})


def _duality(rng) -> TrialResult:
    fw = random_framework(rng)
    kin = analyze_kinematics(fw, EXACT)
    st = analyze_statics(fw, EXACT)
    d, n = fw.dimension, fw.n_vertices
    law = st.dim_equilibrium == d * n - d * (d + 1) // 2
    ok = kin.dof == st.static_dof and law
    detail = {"dof": kin.dof, "static_dof": st.static_dof, "dim_equilibrium": st.dim_equilibrium, "equilibrium_law": law}
    return TrialResult(0, ok, detail, {"framework": framework_to_dict(fw)})


def _virtual_work(rng) -> TrialResult:
    fw = random_framework(rng)
    kin = analyze_kinematics(fw, EXACT)
    R = rigidity_matrix(fw, EXACT).matrix
    Q = np.array([q.reshape(-1) for q in kin.motion_basis], dtype=object).reshape(-1, R.shape[1])
    T = np.array([q.reshape(-1) for q in kin.trivial_basis], dtype=object).reshape(-1, R.shape[1])
    _, eq = rank_nullspace(equilibrium_matrix(fw, EXACT), EXACT)
    first = all(v == 0 for v in (R.dot(Q.T)).ravel())
    second = all(v == 0 for v in (eq.dot(T.T)).ravel())
    # the relations are sharp: each space is the full annihilator of the other
    size = R.shape[1]
    sharp = Q.shape[0] + (rank(R, EXACT) if R.shape[0] else 0) == size and T.shape[0] + eq.shape[0] == size
    ok = first and second and sharp
    detail = {"motions_vs_resolvable": first, "trivial_vs_equilibrium": second, "complementary_dimensions": sharp}
    return TrialResult(0, ok, detail, {"framework": framework_to_dict(fw)})


def _affine(rng) -> TrialResult:
    fw = random_framework(rng)
    phi = random_affine_map(rng, fw)
    img = apply_projective(phi, fw)
    k0, k1 = analyze_kinematics(fw, EXACT), analyze_kinematics(img, EXACT)
    moved = [transport_motion(phi, fw, Q) for Q in k0.motion_basis]
    R = rigidity_matrix(img, EXACT).matrix
    exact_motions = all(all(v == 0 for v in R.dot(Q.reshape(-1))) for Q in moved) if R.shape[0] else True
    ok = k0.dof == k1.dof and k0.rigid == k1.rigid and exact_motions
    detail = {"dof": k0.dof, "dof_image": k1.dof, "rigid": k0.rigid, "rigid_image": k1.rigid, "motions_preserved": exact_motions}
    return TrialResult(0, ok, detail, {"framework": framework_to_dict(fw), "map": projective_map_to_dict(phi)})


def _blaschke(rng, index) -> TrialResult:
    kind = index % 3
    if kind == 0:
        twist = TWIST_SWEEP[(index // 3) % len(TWIST_SWEEP)]
        fw = twisted_octahedron(r=1, h=float(rng.uniform(0.5, 2.0)), twist=twist)
        tol = FLOATING
        label = {"example": "twisted_octahedron", "twist": twist}
    else:
        while True:
            apex = [int(v) for v in rng.integers(-3, 4, size=3)]
            s1 = Fraction(int(rng.integers(1, 6)), int(rng.integers(2, 9))) * int(rng.choice([-1, 1]))
            s2 = Fraction(int(rng.integers(1, 6)), int(rng.integers(2, 9))) * int(rng.choice([-1, 1]))
            try:
                fw = liebmann_octahedron(apex, s1, s2)
            except (InvalidParameters, RigidityError):
                continue
            if affine_span_dim(fw, EXACT) == 3:
                break
        if kind == 2:
            # move one vertex off the concurrent position
            pts = fw.points.copy()
            pts[5] = pts[5] + as_exact(np.array([Fraction(1, 3), Fraction(-1, 5), Fraction(1, 7)], dtype=object))
            fw = fw.replace(points=pts)
        tol = EXACT
        label = {"example": "liebmann_octahedron", "perturbed": kind == 2}
    flexible = analyze_kinematics(fw, tol).dof >= 1
    planes = blaschke_check(fw, tol=tol)
    detail = {**label, "flexible": flexible, "planes_concurrent": planes}
    return TrialResult(0, flexible == planes, detail, {"framework": framework_to_dict(fw)})


_CHECKS: dict[str, Callable] = {
    "darboux-sauer": lambda rng, i: _darboux_sauer(rng),
    "pogorelov": lambda rng, i: _pogorelov(rng),
    "static-kinematic-duality": lambda rng, i: _duality(rng),
    "virtual-work": lambda rng, i: _virtual_work(rng),
    "affine-invariance": lambda rng, i: _affine(rng),
    "blaschke": _blaschke,
}
PROPERTIES = tuple(_CHECKS)


def run_trial(prop: str, seed: int, index: int) -> TrialResult:
    result = _CHECKS[prop](_rng(seed, index), index)
    result.index = index
    return result


def run_property(prop: str, trials: int = 10, seed: int = 0, dump_dir: str | Path | None = None) -> dict:
    """Run ``trials`` seeded instances of a property and collect a report."""
    if prop not in _CHECKS:
        raise ValueError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    results = sorted((run_trial(prop, seed, k) for k in range(trials)), key=lambda r: r.index)
    failed = [r for r in results if not r.passed]
    if dump_dir is not None and failed:
        out = Path(dump_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in failed:
            (out / f"{prop}-seed{seed}-trial{r.index}.json").write_text(dumps(r.instance) + "\n", encoding="utf-8")
    return {
        "property": prop,
        "seed": seed,
        "trials": trials,
        "passed": len(results) - len(failed),
        "failed": len(failed),
        "results": [r.to_dict() for r in results],
    }
