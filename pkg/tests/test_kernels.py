import os
import subprocess
import sys

import numpy as np
import pytest

from infrig import _kernels as K

pytestmark = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def data():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(7, 3))
    edges = [(i, j) for i in range(7) for j in range(i + 1, 7) if rng.random() < 0.6]
    return pts, edges


def test_edge_rows_agree(data):
    pts, edges = data
    ei, ej = K._edge_arrays(edges)
    assert np.array_equal(K.edge_rows_numba(pts, ei, ej, np.ones(3), False), K.edge_rows_numpy(pts, edges))
    g = np.array([-1.0, 1.0, 1.0])
    assert np.array_equal(K.edge_rows_numba(pts, ei, ej, g, True), K.edge_rows_numpy(pts, edges, g))
    assert np.array_equal(K.tangency_rows_numba(pts, g), K.tangency_rows_numpy(pts, g))


def test_equilibrium_matrix_agrees(data):
    pts, _ = data
    assert np.array_equal(K.equilibrium_matrix_numba(pts), K.equilibrium_matrix_numpy(pts))


def test_transport_blocks_agree(data):
    pts, _ = data
    rng = np.random.default_rng(1)
    mat = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
    a, b = K.stat_matrices_numba(mat, pts), K.stat_matrices_numpy(mat, pts)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)
    v = rng.normal(size=pts.shape)
    for flag in (False, True):
        assert np.allclose(K.apply_blocks_numba(a, v, flag), K.apply_blocks_numpy(a, v, flag), rtol=1e-12)


def test_empty_edge_list():
    pts = np.zeros((2, 2))
    assert K.edge_rows(pts, []).shape == (0, 4)


def test_env_flag_selects_numpy():
    env = dict(os.environ, INFRIG_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from infrig import _kernels; print(_kernels.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
