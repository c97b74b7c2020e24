from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infrig.errors import DegenerateSpan, DimensionMismatch, ExactModeUnavailable
from infrig.framework import Framework
from infrig.linalg import EXACT, as_exact, rank
from infrig.rigidity import (
    Unresolvable,
    analyze_kinematics,
    analyze_statics,
    edge_load,
    edge_residuals,
    is_equilibrium_load,
    pairing,
    resolve_load,
    rigidity_matrix,
    total_bivector,
    trivial_motions,
)

from conftest import euclid


def test_single_edge_line():
    fw = euclid([[0], [1]], [[0, 1]])
    m = rigidity_matrix(fw, EXACT).matrix
    assert m.tolist() == [[-1, 1]]


def test_triangle(triangle):
    for tol in (EXACT, None):
        r = analyze_kinematics(triangle, tol) if tol else analyze_kinematics(triangle)
        assert (r.dof, r.rigid, r.dim_trivial) == (0, True, 3)
    assert rigidity_matrix(triangle, EXACT).shape == (3, 6)


def test_square(square):
    r = analyze_kinematics(square, EXACT)
    assert (r.dim_motions, r.dim_trivial, r.dof) == (4, 3, 1)
    s = analyze_statics(square, EXACT)
    assert (s.dim_equilibrium, s.dim_resolvable, s.static_dof) == (5, 4, 1)


def test_triangle_statics(triangle):
    s = analyze_statics(triangle, EXACT)
    assert (s.dim_equilibrium, s.dim_resolvable, s.static_dof) == (3, 3, 0)


def test_hyperbolic_edge():
    h = Framework(1, "hyperbolic", [[1, 0], [Fraction(5, 4), Fraction(3, 4)]], [(0, 1)])
    rm = rigidity_matrix(h, EXACT)
    assert rm.shape == (3, 4) and rm.tangency_rows == slice(1, 3)
    r = analyze_kinematics(h, EXACT)
    assert r.dof == 0 and r.dim_trivial == 1


def test_spherical_points_trivial_basis():
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(3, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    fw = Framework(2, "spherical", pts, [])
    assert len(trivial_motions(fw)) == 3


def test_ambient_motions_satisfy_constraints():
    rng = np.random.default_rng(9)
    pts = rng.normal(size=(5, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    fw = Framework(2, "spherical", pts, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)])
    r = analyze_kinematics(fw)
    assert r.dof == 1
    R = rigidity_matrix(fw).matrix
    for Q in r.motion_basis:
        assert np.abs(R @ Q.ravel()).max() < 1e-9
        assert np.abs(edge_residuals(fw, Q)).max() < 1e-9


def test_trivial_dimension_in_higher_dimensions():
    for d in (1, 2, 3, 4):
        pts = [[0] * d] + np.eye(d, dtype=int).tolist()
        assert len(trivial_motions(euclid(pts, [], d), EXACT)) == comb(d + 1, 2)


def test_degenerate_span_flag():
    fw = euclid([[0, 0, 0], [1, 1, 1], [2, 2, 2]], [[0, 1], [1, 2]])
    r = analyze_kinematics(fw, EXACT)
    # rotation about the common line moves nothing
    assert r.degenerate_span and r.dim_trivial == 5
    with pytest.raises(DegenerateSpan):
        analyze_statics(fw)


def test_exact_on_float_framework():
    fw = Framework(1, "euclidean", [[0.5], [1.0]], [(0, 1)])
    with pytest.raises(ExactModeUnavailable):
        analyze_kinematics(fw, EXACT)


def test_equilibrium_examples(triangle):
    F = edge_load(triangle, 0, 1)
    assert is_equilibrium_load(triangle, F)
    single = np.array([[1, 0], [0, 0], [0, 0]], dtype=object)
    assert not is_equilibrium_load(triangle, single)
    couple = np.array([[1, 0], [0, 0], [-1, 0]], dtype=object)
    assert not is_equilibrium_load(triangle, couple)
    T = total_bivector(triangle, as_exact(couple))
    assert T.components.tolist() == [0, 0, 1]
    with pytest.raises(DimensionMismatch):
        is_equilibrium_load(triangle, np.zeros((2, 2)))


def test_resolve_edge_load(triangle):
    w = resolve_load(triangle, edge_load(triangle, 0, 1), EXACT)
    assert w[0, 1] == 1 and w[1, 2] == 0 and w[0, 2] == 0
    w = resolve_load(triangle, edge_load(triangle, 0, 1))
    assert np.allclose(w.values, [1, 0, 0])
    z = resolve_load(triangle, np.zeros((3, 2)))
    assert np.allclose(z.values, 0)


def test_resolve_sign_convention(triangle):
    # f_i = sum_j w_ij (p_i - p_j) at every vertex
    F = 2 * edge_load(triangle, 0, 1) + 3 * edge_load(triangle, 1, 2) - edge_load(triangle, 0, 2)
    w = resolve_load(triangle, F, EXACT)
    pts = triangle.points
    for i in range(3):
        rhs = sum((w[i, j] * (pts[i] - pts[j]) for j in range(3) if j != i), np.zeros(2, dtype=object))
        assert (rhs == F[i]).all()
    assert (w[0, 1], w[1, 2], w[0, 2]) == (2, 3, -1)


def test_square_unresolvable(square):
    flex = [Q for Q in analyze_kinematics(square, EXACT).motion_basis]
    # an equilibrium load that does work on some motion cannot be resolved
    F = as_exact(np.array([[1, 1], [0, 0], [-1, -1], [0, 0]], dtype=object))
    assert is_equilibrium_load(square, F)
    assert any(pairing(Q, F) != 0 for Q in flex)
    res = resolve_load(square, F, EXACT)
    assert isinstance(res, Unresolvable) and not res
    assert isinstance(resolve_load(square, F), Unresolvable)


def test_pairing_example():
    assert pairing(np.array([[1, 0], [0, 0]]), np.array([[2, 3], [5, 7]])) == 2


def test_rank_criterion_on_catalog():
    from infrig.catalog import cycle, desargues, liebmann_octahedron, simplex

    for fw in [simplex(2), simplex(3), cycle(4), cycle(5), desargues(True), desargues(False), liebmann_octahedron()]:
        d, n = fw.dimension, fw.n_vertices
        r = analyze_kinematics(fw, EXACT)
        rk = rank(rigidity_matrix(fw, EXACT).matrix, EXACT)
        assert r.rigid == (rk == d * n - comb(d + 1, 2))


coords = st.integers(-4, 4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=6, unique=True), st.data())
def test_duality_property(points, data):
    n = len(points)
    pts = np.array(points)
    if rank(np.hstack([np.ones((n, 1)), pts]).astype(float)) < 3:
        return
    all_edges = [[i, j] for i in range(n) for j in range(i + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(all_edges), unique_by=tuple, max_size=len(all_edges)))
    fw = euclid([list(p) for p in points], edges)
    k = analyze_kinematics(fw, EXACT)
    s = analyze_statics(fw, EXACT)
    assert k.dof == s.static_dof
    assert s.dim_equilibrium == 2 * n - 3
