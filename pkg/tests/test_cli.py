import csv
import io
import json
import subprocess
import sys

import pytest

from mhpoly.cli import run


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    return code, json.loads(out) if out else None


def test_show_p1_json():
    code, data = call_json("show", "--space", "P1")
    assert code == 0
    assert data["mh"] == [[0, 0, 0, "1"], [2, 1, 1, "1"]]
    assert data["mh_pi"] == [[2, 1, 1, "1"], [3, 2, 2, "1"]]
    assert (data["euler"], data["euler_pi"]) == (2, 0)


def test_show_text():
    code, out, _ = call("show", "--space", "P1")
    assert code == 0
    assert "MH: 1 + t^2uv" in out
    assert "MHpi: t^2uv + t^3u^2v^2" in out
    _, out, _ = call("show", "--space", "S2")
    assert "placeholder" in out


def test_eval_point_space():
    code, data = call_json("eval", "--space", "pt", "--at", "1,1,1")
    assert code == 0 and data["mh"] == "1/1" and data["mh_pi"] == "0/1"
    code, out, _ = call("eval", "--space", "P1", "--at", "11/10,1,1")
    assert code == 0 and "margin = -331/1000" in out
    code, data = call_json("eval", "--space", "P1", "--at", "1.1,1,1")
    assert data["margin"] == "-331/1000"


def test_hilali_and_euler_exit_codes():
    code, data = call_json("hilali", "--space", "P1")
    assert code == 2 and (data["left"], data["right"], data["relation"]) == ("2/1", "2/1", "=")
    assert call("hilali", "--space", "P2")[0] == 0
    assert call("euler", "--space", "P1 x P2")[0] == 0


def test_threshold_point():
    code, data = call_json("threshold-point", "--space", "P1", "--at", "1,1,1")
    assert code == 0 and data["n0"] == 3 and data["minimal"]
    code, out, _ = call("threshold-point", "--space", "P1", "--at", "2,2,2")
    assert code == 0 and "n0: 2" in out


def test_threshold_cube_and_halfline():
    code, data = call_json("threshold-cube", "--space", "P1", "--eps", "1/2", "--r", "2")
    assert code == 0 and data["n0"] == 167
    code, data = call_json("threshold-halfline", "--space", "P1", "--eps", "1/2")
    assert code == 0 and data["n0"] == 3 and data["region"]["hi"] is None


def test_probe():
    code, data = call_json("probe", "--space", "P1", "--eps", "1/2", "--r-list", "1,2,4")
    assert code == 0
    assert data["label"].startswith("exploration")
    assert data["n0_values"] == sorted(data["n0_values"])


def test_csv_output():
    code, out, _ = call("threshold-point", "--space", "P1", "--at", "1,1,1", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert code == 0 and rows["n0"] == "3" and rows["minimal"] == "true"


@pytest.mark.parametrize("argv", [
    ["show", "--space", "P1 ^"],
    ["show", "--space", "K3"],
    ["show", "--space", "S1"],
    ["eval", "--space", "P1", "--at", "1,1"],
    ["threshold-cube", "--space", "P1", "--eps", "2", "--r", "1"],
    ["threshold-cube", "--space", "P1", "--eps", "0.5.1", "--r", "1"],
    ["eval", "--space", "S2", "--at", "1,2,1"],
    ["minmodel", "--presentation", "/nonexistent.json"],
    ["frobnicate"],
])
def test_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_parse_error_points_at_offset():
    code, _, err = call("show", "--space", "P1 ^")
    assert code == 1
    assert "offset 4" in err and "P1 ^\n    ^" in err


def test_unknown_atom_lists_available():
    _, _, err = call("show", "--space", "P1 x Foo")
    assert "Foo" in err and "P<n>" in err


def test_catalog_flag(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"spaces": [{"name": "Quad", "mh": [[0, 0, 0, "1"], [2, 1, 1, "1"],
                                                                   [4, 2, 2, "1"]],
                                            "mh_pi": [[2, 1, 1, "1"], [5, 3, 3, "1"]]}]}))
    code, data = call_json("show", "--space", "Quad x P1", "--catalog", str(path))
    assert code == 0 and data["euler"] == 6
    assert call("show", "--space", "Quad")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"spaces": [{"name": "B", "mh": [[0, 0, 0, "2"]], "mh_pi": []}]}')
    assert call("show", "--space", "P1", "--catalog", str(bad))[0] == 1


def test_minmodel(tmp_path):
    path = tmp_path / "p2.json"
    path.write_text(json.dumps({"generators": [{"name": "x", "degree": 2}], "relations": ["x^3"]}))
    code, data = call_json("minmodel", "--presentation", str(path), "--cutoff", "8")
    assert code == 0
    assert data["homotopy_ranks"] == {"2": 1, "5": 1}
    assert data["checks"]["quasi_iso"] and data["checks"]["minimal"]
    code, out, _ = call("minmodel", "--presentation", str(path))
    assert "homotopy ranks: 2:1, 5:1" in out
    assert call("minmodel", "--presentation", str(path), "--cutoff", "1")[0] == 1


def test_recheck_roundtrip(tmp_path):
    for argv in (["threshold-point", "--space", "P1", "--at", "1,1,1"],
                 ["threshold-cube", "--space", "P1", "--eps", "1/2", "--r", "2", "--depth", "1"],
                 ["threshold-halfline", "--space", "P1", "--eps", "1/2"],
                 ["probe", "--space", "P1", "--eps", "1/2", "--r-list", "1,2"]):
        _, out, _ = call(*argv, "--format", "json")
        path = tmp_path / "cert.json"
        path.write_text(out)
        code, data = call_json("recheck", "--certificate", str(path))
        assert code == 0 and data["accepted"], data
        doc = json.loads(out)
        for cert in doc.get("certificates", [doc]):
            cert["n0"] -= 1
        path.write_text(json.dumps(doc))
        assert call("recheck", "--certificate", str(path))[0] == 2


def test_json_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "mhpoly", "threshold-halfline", "--space", "P1 x S3^2",
            "--eps", "1/2", "--format", "json"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
    argv = [sys.executable, "-m", "mhpoly", "show", "--space", "P2^2 x S4", "--format", "json"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
