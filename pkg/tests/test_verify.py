import json

import numpy as np
import pytest

from infrig import verify
from infrig.framework import parse_framework
from infrig.linalg import EXACT, rank
from infrig.projective import h_infinity


def test_random_framework_contract():
    for k in range(30):
        rng = np.random.default_rng([0, k])
        fw = verify.random_framework(rng)
        d = fw.dimension
        box = 5 if d == 2 else 3
        assert fw.is_exact
        assert all(abs(v) <= box for v in fw.points.ravel())
        assert len({tuple(p) for p in fw.points}) == fw.n_vertices
        assert fw.n_vertices - 1 <= fw.n_edges <= fw.n_vertices * (fw.n_vertices - 1) // 2
        # connected
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for i, j in fw.edges:
                for a, b in ((i, j), (j, i)):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        assert len(seen) == fw.n_vertices


def test_random_maps():
    rng = np.random.default_rng(3)
    fw = verify.random_framework(rng, d=2)
    phi = verify.random_projective_map(rng, fw)
    assert not phi.affine and all(abs(h_infinity(phi, p)) > 0.1 for p in fw.float_points())
    assert verify.random_affine_map(rng, fw).affine


@pytest.mark.parametrize("prop", verify.PROPERTIES)
def test_properties_pass(prop):
    report = verify.run_property(prop, trials=6, seed=123)
    assert report["failed"] == 0, report


def test_reproducible_per_trial():
    a = verify.run_property("static-kinematic-duality", trials=5, seed=9)
    b = verify.run_property("static-kinematic-duality", trials=5, seed=9)
    assert a == b
    single = verify.run_trial("static-kinematic-duality", 9, 3).to_dict()
    assert single == a["results"][3]


def test_failing_instances_are_dumped(tmp_path, monkeypatch):
    failing = lambda rng, i: verify.TrialResult(0, False, {}, {"framework": {"dimension": 1}})
    monkeypatch.setitem(verify._CHECKS, "virtual-work", failing)
    report = verify.run_property("virtual-work", trials=2, seed=1, dump_dir=tmp_path)
    assert report["failed"] == 2
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["virtual-work-seed1-trial0.json", "virtual-work-seed1-trial1.json"]
    assert json.loads((tmp_path / files[0]).read_text()) == {"framework": {"dimension": 1}}


def test_bad_plan():
    with pytest.raises(ValueError):
        verify.run_property("nope")
    with pytest.raises(ValueError):
        verify.run_property("blaschke", trials=0)
