from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy

from infrig.catalog import (
    ExampleSpec,
    blaschke_check,
    bipartite_quadric,
    cycle,
    desargues,
    liebmann_octahedron,
    make_example,
    radial_flex,
    simplex,
    twisted_octahedron,
)
from infrig.errors import ImproperColoring, InvalidParameters, NotOctahedral
from infrig.linalg import EXACT
from infrig.rigidity import analyze_kinematics, rigidity_matrix

from conftest import euclid

SQ3 = sympy.sqrt(3)


def sympy_antiprism(twist_deg):
    """Twisted antiprism (r = h = 1) with exact coordinates in Q(sqrt 3)."""
    def pt(angle, z):
        a = sympy.rad(angle)
        return [sympy.nsimplify(sympy.cos(a)), sympy.nsimplify(sympy.sin(a)), z]

    pts = [pt(120 * k, 0) for k in range(3)] + [pt(60 + twist_deg + 120 * k, 1) for k in range(3)]
    fw = twisted_octahedron(twist=twist_deg)
    rows = []
    for i, j in fw.edges:
        row = [0] * 18
        for c in range(3):
            row[3 * i + c] = pts[i][c] - pts[j][c]
            row[3 * j + c] = pts[j][c] - pts[i][c]
        rows.append(row)
    return pts, sympy.Matrix(rows)


def test_simplex_and_cycle():
    assert analyze_kinematics(simplex(2), EXACT).dof == 0
    assert analyze_kinematics(cycle(4), EXACT).dof == 1
    assert cycle(4).points.tolist() == [[0, 0], [1, 0], [1, 1], [0, 1]]
    for n in (3, 5, 7):
        pts = cycle(n).points
        assert all(x * x + y * y == 1 for x, y in pts)
        assert analyze_kinematics(cycle(n), EXACT).dof == n - 3


@pytest.mark.parametrize("twist, dof", [(90, 1), (0, 0), (60, 0)])
def test_twisted_octahedron_exact_oracle(twist, dof):
    _, m = sympy_antiprism(twist)
    assert 18 - m.rank(simplify=True) - 6 == dof
    assert analyze_kinematics(twisted_octahedron(twist=twist)).dof == dof


def test_twisted_octahedron_sweep():
    for twist in (50, 60, 70, 80, 90, 100):
        fw = twisted_octahedron(twist=twist)
        flexible = analyze_kinematics(fw).dof >= 1
        assert blaschke_check(fw) == flexible == (twist == 90)
        assert blaschke_check(fw, color="white") == flexible
    assert twisted_octahedron().metadata["provenance"]["approximate"]


def test_blaschke_planes_exact_oracle():
    pts, _ = sympy_antiprism(90)
    fw = twisted_octahedron(twist=90)
    planes = []
    for face in fw.metadata["coloring"]["black"]:
        m = sympy.Matrix([[1, *pts[v]] for v in face])
        planes.append(list(m.nullspace()[0]))
    assert sympy.Matrix(planes).rank(simplify=True) == 3


def test_regular_octahedron_is_rigid():
    fw = twisted_octahedron(r=1, h=2 ** 0.5, twist=0)
    edges = [np.linalg.norm(fw.points[i] - fw.points[j]) for i, j in fw.edges]
    assert np.ptp(edges) < 1e-12
    assert analyze_kinematics(fw).dof == 0
    assert not blaschke_check(fw)


def test_liebmann():
    fw = liebmann_octahedron()
    assert fw.is_exact
    assert analyze_kinematics(fw, EXACT).dof == 1
    assert blaschke_check(fw) and blaschke_check(fw, color="white")
    pts = fw.points.copy()
    pts[5] = pts[5] + np.array([Fraction(1, 3), 0, 0], dtype=object)
    moved = fw.replace(points=pts)
    assert not blaschke_check(moved)
    assert analyze_kinematics(moved, EXACT).dof == 0


def test_desargues():
    assert analyze_kinematics(desargues(True), EXACT).dof == 1
    assert analyze_kinematics(desargues(False), EXACT).dof == 0
    par = desargues(True, parallel=True)
    assert analyze_kinematics(par, EXACT).dof == 1


def test_parallel_desargues_flex_is_a_translation():
    from infrig.linalg import rank_nullspace

    fw = desargues(True, parallel=True)
    R = rigidity_matrix(fw, EXACT).matrix
    pin = np.zeros((6, 12), dtype=object)
    for k in range(6):
        pin[k, k] = 1
    _, ker = rank_nullspace(np.vstack([R, pin]), EXACT)
    assert ker.shape[0] == 1
    inner = ker[0].reshape(6, 2)[3:]
    strut = fw.points[3] - fw.points[0]
    assert (inner[0] == inner[1]).all() and (inner[1] == inner[2]).all()
    assert inner[0] @ strut == 0 and any(inner[0])


def test_bipartite_quadric_radial_flex():
    fw = bipartite_quadric(3, 3)
    assert all(x * x + y * y == 1 for x, y in fw.points)
    r = analyze_kinematics(fw, EXACT)
    assert r.dof >= 1
    q = radial_flex(fw)
    assert all(v == 0 for v in rigidity_matrix(fw, EXACT).matrix.dot(q.ravel()))
    R = rigidity_matrix(fw).matrix
    qf = q.astype(float).ravel()
    assert np.linalg.norm(R @ qf) < 1e-10 * np.linalg.norm(qf)
    # and it is not a trivial motion
    triv = np.array([t.ravel() for t in r.trivial_basis], dtype=object)
    from infrig.linalg import rank

    assert rank(np.vstack([triv, q.reshape(1, -1)]), EXACT) == len(r.trivial_basis) + 1


def test_bipartite_on_ellipsoid():
    fw = bipartite_quadric(4, 4, axes=[1, 2, 3])
    a = np.array([1, 4, 9], dtype=object)
    assert all(sum(p * p / a) == 1 for p in fw.points)
    q = radial_flex(fw)
    assert all(v == 0 for v in rigidity_matrix(fw, EXACT).matrix.dot(q.ravel()))


def test_full_span_catalog_trivial_dimension():
    for fw in [simplex(3), cycle(5), desargues(), liebmann_octahedron(), bipartite_quadric(3, 3)]:
        assert analyze_kinematics(fw, EXACT).dim_trivial == comb(fw.dimension + 1, 2)


def test_make_example_and_errors():
    assert make_example(ExampleSpec("simplex", {"d": 3})).n_vertices == 4
    assert make_example("cycle", n=6).n_edges == 6
    for bad in [ExampleSpec("nope"), ExampleSpec("simplex", {"d": 0}), ExampleSpec("cycle", {"x": 1}),
                ExampleSpec("twisted_octahedron", {"h": -1}), ExampleSpec("bipartite_quadric", {"axes": [1]}),
                ExampleSpec("desargues", {"ratio": 1})]:
        with pytest.raises(InvalidParameters):
            make_example(bad)


def test_blaschke_errors():
    with pytest.raises(NotOctahedral):
        blaschke_check(simplex(3))
    fw = twisted_octahedron()
    col = fw.metadata["coloring"]
    swapped = {"black": col["black"][:3] + [col["white"][0]], "white": col["white"][1:] + [col["black"][3]]}
    with pytest.raises(ImproperColoring):
        blaschke_check(fw, swapped)
    with pytest.raises(ImproperColoring):
        blaschke_check(fw, {"black": []})
    bare = euclid(fw.points.tolist(), [list(e) for e in fw.edges], 3)
    with pytest.raises(ImproperColoring):
        blaschke_check(bare)


def test_deterministic():
    assert liebmann_octahedron().same_as(liebmann_octahedron())
    assert np.array_equal(twisted_octahedron(twist=70).points, twisted_octahedron(twist=70).points)
