from fractions import Fraction

import numpy as np
import pytest

from infrig.errors import OutsideDisk, TangencyViolation
from infrig.framework import Framework
from infrig.linalg import EXACT
from infrig.pogorelov import central_project, closed_form_transport, fit_disk, pogorelov_transport
from infrig.rigidity import analyze_kinematics, rigidity_matrix, trivial_generator_matrix

from conftest import euclid, rel_err


def test_projection_examples():
    c = Framework(1, "euclidean", [[0]], [])
    assert central_project(c, "hyperbolic").points.tolist() == [[1, 0]]
    assert central_project(c, "spherical").points.tolist() == [[1, 0]]
    h = central_project(Framework(1, "euclidean", [[Fraction(3, 5)]], []), "hyperbolic").points[0]
    assert np.allclose(h, [1.25, 0.75])
    assert h[0] ** 2 - h[1] ** 2 == pytest.approx(1)
    s = central_project(Framework(1, "euclidean", [[1]], []), "spherical").points[0]
    assert np.allclose(s, [2 ** -0.5, 2 ** -0.5])
    with pytest.raises(OutsideDisk):
        central_project(Framework(1, "euclidean", [[1]], []), "hyperbolic")


def test_transport_at_tangent_point():
    fw = euclid([[0, 0], [Fraction(1, 2), 0]], [[0, 1]])
    Q = np.array([[1.0, 2.0], [0.0, 1.0]])
    up = pogorelov_transport(fw, Q, "to_hyperbolic")
    assert np.allclose(up[0], [0, 1, 2])
    # Euclidean velocity is the projection of sqrt(1 - |p|^2) times the hyperbolic one
    assert np.allclose(np.sqrt(0.75) * up[1][1:], Q[1])
    x = central_project(fw, "hyperbolic").points[1]
    assert abs(-x[0] * up[1][0] + x[1:] @ up[1][1:]) < 1e-15


def test_square_flex_to_hyperbolic(square):
    small = fit_disk(square)
    hyp = central_project(small, "hyperbolic")
    R = rigidity_matrix(hyp).matrix
    flex = analyze_kinematics(small, EXACT).motion_basis
    for Q in flex:
        up = pogorelov_transport(small, Q, "to_hyperbolic")
        assert np.abs(R @ up.ravel()).max() < 1e-9


@pytest.mark.parametrize("target", ["hyperbolic", "spherical"])
def test_closed_form_and_round_trip(target):
    rng = np.random.default_rng(0)
    for _ in range(30):
        pts = rng.uniform(-0.6, 0.6, size=(5, 3))
        fw = Framework(3, "euclidean", pts, [])
        Q = rng.normal(size=(5, 3))
        up = pogorelov_transport(fw, Q, "to_" + target)
        assert rel_err(up, closed_form_transport(fw, Q, "to_" + target)) < 1e-12
        back = pogorelov_transport(fw, up, "from_" + target)
        assert rel_err(back, Q) < 1e-12
        assert rel_err(closed_form_transport(fw, up, "from_" + target), Q) < 1e-12


@pytest.mark.parametrize("target", ["hyperbolic", "spherical"])
def test_trivial_to_trivial(target, triangle):
    small = fit_disk(triangle)
    image = central_project(small, target)
    G = trivial_generator_matrix(image)
    for Q in analyze_kinematics(small, EXACT).trivial_basis:
        up = pogorelov_transport(small, Q, "to_" + target).ravel()
        coef, *_ = np.linalg.lstsq(G.T, up, rcond=None)
        assert np.linalg.norm(G.T @ coef - up) < 1e-9 * np.linalg.norm(up)


def test_non_tangent_input_rejected(triangle):
    small = fit_disk(triangle)
    with pytest.raises(TangencyViolation):
        pogorelov_transport(small, np.ones((3, 3)), "from_spherical")


def test_fit_disk_keeps_exactness(square):
    small = fit_disk(square, Fraction(9, 10))
    assert small.is_exact
    assert max(float(p @ p) for p in small.points) < 0.81 + 1e-15
    with pytest.raises(ValueError):
        fit_disk(square, 2)


def test_dof_across_geometries():
    from infrig.catalog import desargues

    for concurrent in (True, False):
        fw = fit_disk(desargues(concurrent))
        dof = analyze_kinematics(fw, EXACT).dof
        assert analyze_kinematics(central_project(fw, "spherical")).dof == dof
        assert analyze_kinematics(central_project(fw, "hyperbolic")).dof == dof
