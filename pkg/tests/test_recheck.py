import copy
import json
from fractions import Fraction as F

import pytest

from mhpoly import catalog as cat
from mhpoly.poly import RationalPoint
from mhpoly.recheck import recheck
from mhpoly.verify import cube_threshold, halfline_threshold, point_threshold

P1 = cat.projective_space(1)


def _certs():
    return {
        "point": point_threshold(P1, RationalPoint(1, 1, 1)).to_json(),
        "point2": point_threshold(P1, RationalPoint(2, 2, 2)).to_json(),
        "cube": cube_threshold(P1, F(1, 2), 2, 0).to_json(),
        "cube_refined": cube_threshold(P1, F(1, 2), 2, 2).to_json(),
        "halfline": halfline_threshold(P1, F(1, 2)).to_json(),
        "halfline2": halfline_threshold(P1, 2).to_json(),
        "trivial": halfline_threshold(cat.point(), F(1, 10)).to_json(),
        "product": cube_threshold(cat.product(P1, cat.projective_space(2)), 1, 2, 1).to_json(),
    }


CERTS = _certs()


@pytest.mark.parametrize("name", sorted(CERTS))
def test_accepts_genuine_certificates(name):
    doc = json.loads(json.dumps(CERTS[name]))
    result = recheck(doc)
    assert result.ok, result.errors
    assert result.n0 == doc["n0"]


def _decrement(doc):
    bad = copy.deepcopy(doc)
    bad["n0"] -= 1
    return bad


def _decrement_consistently(doc):
    """Lower n0 and rewrite every derived field so only the inequality can object."""
    bad = _decrement(doc)
    n0 = bad["n0"]
    if bad.get("base_check"):
        bad["base_check"]["n"] = n0
    if bad.get("minimality_witness"):
        bad["minimality_witness"]["n"] = n0 - 1
    if bad.get("tail"):
        bad["tail"]["n"] = n0
    return bad


@pytest.mark.parametrize("name", ["point", "point2", "cube", "cube_refined", "halfline", "halfline2"])
@pytest.mark.parametrize("mutate", [_decrement, _decrement_consistently])
def test_rejects_decremented_n0(name, mutate):
    result = recheck(mutate(CERTS[name]))
    assert not result.ok and result.errors


def test_rejects_tampered_values():
    doc = copy.deepcopy(CERTS["cube"])
    doc["B_hi"] = "143/1"
    assert not recheck(doc).ok

    doc = copy.deepcopy(CERTS["cube"])
    doc["mh_pi"][0][3] = "2"
    assert not recheck(doc).ok

    doc = copy.deepcopy(CERTS["point"])
    doc["minimality_witness"]["point"] = ["3/1", "1/1", "1/1"]
    assert not recheck(doc).ok


def test_rejects_broken_subdivision():
    doc = copy.deepcopy(CERTS["cube_refined"])
    doc["subdivision"]["children"][0]["hi"][0] = "3/2"
    assert not recheck(doc).ok

    doc = copy.deepcopy(CERTS["cube_refined"])
    doc["subdivision"]["children"] = doc["subdivision"]["children"][:1]
    assert not recheck(doc).ok

    doc = copy.deepcopy(CERTS["halfline"])
    doc["tail"]["t_star"] = "1/1"
    assert not recheck(doc).ok


def test_rejects_widened_region():
    doc = copy.deepcopy(CERTS["cube"])
    doc["region"]["lo"] = ["1/4"] * 3
    assert not recheck(doc).ok


@pytest.mark.parametrize("doc", [None, {}, {"variant": "ball"}, {"variant": "point", "n0": "3"}, [1, 2]])
def test_malformed_input_is_rejected_not_raised(doc):
    assert not recheck(doc).ok


def test_recheck_is_standalone():
    import ast
    import importlib

    mod = importlib.import_module("mhpoly.recheck")

    tree = ast.parse(open(mod.__file__).read())
    imported = {a.name.split(".")[0] for node in ast.walk(tree)
                if isinstance(node, ast.Import) for a in node.names}
    imported |= {node.module.split(".")[0] for node in ast.walk(tree)
                 if isinstance(node, ast.ImportFrom) and node.module and node.level == 0}
    relative = [node for node in ast.walk(tree) if isinstance(node, ast.ImportFrom) and node.level]
    assert not relative
    assert imported <= {"__future__", "re", "dataclasses", "fractions"}
