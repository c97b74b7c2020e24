import json
from fractions import Fraction

import numpy as np
import pytest

from infrig.errors import (
    CoincidentEdgeEndpoints,
    NonFiniteEntry,
    NonPositiveSheet,
    OffSurfaceVertex,
    SchemaError,
    TangencyViolation,
)
from infrig.framework import (
    Framework,
    Stress,
    affine_span_dim,
    check_field,
    dumps,
    framework_to_dict,
    lift_to_projective,
    load_framework,
    parse_field,
    parse_framework,
    parse_stress,
    stress_to_dict,
)
from infrig.linalg import EXACT

from conftest import euclid


def test_triangle_parses(triangle):
    assert triangle.n_vertices == 3 and triangle.n_edges == 3
    assert triangle.is_exact


def test_decimal_json_stays_exact():
    fw = parse_framework('{"dimension": 1, "geometry": "euclidean", "vertices": [[0.1], [0.7]], "edges": [[0, 1]]}')
    assert fw.points[0, 0] == Fraction(1, 10)


def test_python_floats_are_floating():
    fw = Framework(1, "euclidean", [[0.5], [1.0]], [(0, 1)])
    assert not fw.is_exact


@pytest.mark.parametrize(
    "doc, err",
    [
        ({"dimension": 2, "geometry": "euclidean", "vertices": [[0, 0], [0, 0]], "edges": [[0, 1]]}, CoincidentEdgeEndpoints),
        ({"dimension": 1, "geometry": "hyperbolic", "vertices": [[-1.25, 0.75]], "edges": []}, NonPositiveSheet),
        ({"dimension": 1, "geometry": "hyperbolic", "vertices": [[1.25, 0.7]], "edges": []}, OffSurfaceVertex),
        ({"dimension": 1, "geometry": "spherical", "vertices": [[1, 1]], "edges": []}, OffSurfaceVertex),
        ({"dimension": 2, "geometry": "euclidean", "vertices": [[0, 0], [1, 0]], "edges": [[0, 1], [1, 0]]}, SchemaError),
        ({"dimension": 2, "geometry": "euclidean", "vertices": [[0, 0], [1, 0]], "edges": [[0, 0]]}, SchemaError),
        ({"dimension": 2, "geometry": "euclidean", "vertices": [[0, 0], [1, 0]], "edges": [[0, 2]]}, SchemaError),
        ({"dimension": 2, "geometry": "euclidean", "vertices": [[0, 0, 0]], "edges": []}, SchemaError),
        ({"dimension": 2, "geometry": "elliptic", "vertices": [[0, 0]], "edges": []}, SchemaError),
        ({"dimension": 2, "vertices": [[0, 0]], "edges": []}, SchemaError),
    ],
)
def test_validation_errors(doc, err):
    with pytest.raises(err):
        parse_framework(doc)


def test_non_finite():
    with pytest.raises(NonFiniteEntry):
        Framework(1, "euclidean", [[float("nan")]], [])
    with pytest.raises(SchemaError):
        parse_framework("{not json")


def test_roundtrip_exact_and_float(tmp_path):
    fw = euclid([[Fraction(1, 3), 2], [Fraction(-7, 5), 0], [0, 1]], [[0, 1], [1, 2]])
    back = parse_framework(dumps(framework_to_dict(fw)))
    assert back.same_as(fw)
    pf = Framework(2, "euclidean", np.array([[0.1, 0.2], [1 / 3, 2.0]]), [(0, 1)])
    path = tmp_path / "f.json"
    path.write_text(dumps(framework_to_dict(pf)))
    back = load_framework(path)
    assert np.array_equal(back.float_points(), pf.float_points())


def test_affine_span():
    assert affine_span_dim(euclid([[0, 0], [1, 0], [0, 1]], [])) == 2
    assert affine_span_dim(euclid([[0, 0], [1, 1], [2, 2]], []), EXACT) == 1
    rng = np.random.default_rng(1)
    pts = rng.integers(-9, 10, size=(6, 3)).tolist()
    assert affine_span_dim(euclid(pts, [], 3), EXACT) == 3


def test_lift_to_projective():
    fw = euclid([[2, 3], [0, 0]], [[0, 1]])
    X = lift_to_projective(fw)
    assert X.points[0].tolist() == [1, 2, 3]
    h = Framework(1, "hyperbolic", [[Fraction(5, 4), Fraction(3, 4)], [1, 0]], [(0, 1)])
    assert lift_to_projective(h).points[0].tolist() == [Fraction(5, 4), Fraction(3, 4)]


def test_lift_random_frameworks_valid():
    rng = np.random.default_rng(7)
    for _ in range(50):
        pts = rng.integers(-3, 4, size=(5, 2))
        if len({tuple(p) for p in pts}) < 5:
            continue
        X = lift_to_projective(euclid(pts.tolist(), [[i, j] for i in range(5) for j in range(i + 1, 5)]))
        assert X.points.shape == (5, 3)


def test_fields_and_stress(triangle):
    q = parse_field({"field": [[1, 0], [0, 0], [0, 0]]}, triangle)
    assert q.shape == (3, 2)
    s = parse_stress({"stress": [[1, 0, 2]]}, triangle)
    assert s[0, 1] == s[1, 0] == 2 and s[1, 2] == 0
    assert stress_to_dict(s)["stress"][0] == [0, 1, 2]
    with pytest.raises(SchemaError):
        parse_stress({"stress": [[0, 5, 1]]}, triangle)
    assert isinstance(Stress([(1, 0)], [3])[(0, 1)], np.integer)


def test_tangency_check():
    h = Framework(1, "hyperbolic", [[Fraction(5, 4), Fraction(3, 4)]], [])
    check_field(h, np.array([[Fraction(3, 4), Fraction(5, 4)]], dtype=object))
    with pytest.raises(TangencyViolation):
        check_field(h, np.array([[1.0, 0.0]]))


def test_frozen(triangle):
    with pytest.raises(ValueError):
        triangle.points[0, 0] = 5
