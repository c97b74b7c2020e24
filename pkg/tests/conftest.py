import json

import numpy as np
import pytest

from infrig.framework import parse_framework


def euclid(vertices, edges, d=None):
    d = len(vertices[0]) if d is None else d
    return parse_framework({"dimension": d, "geometry": "euclidean", "vertices": vertices, "edges": edges})


@pytest.fixture
def triangle():
    return euclid([[0, 0], [1, 0], [0, 1]], [[0, 1], [1, 2], [0, 2]])


@pytest.fixture
def square():
    return euclid([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1], [1, 2], [2, 3], [0, 3]])


@pytest.fixture
def shear():
    from infrig.projective import ProjectiveMap

    return ProjectiveMap([[1, 1, 0], [0, 1, 0], [0, 0, 1]])


@pytest.fixture
def write_json(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return _write


def rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    den = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return float(np.linalg.norm(a - b) / den)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
