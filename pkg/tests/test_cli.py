import json

import pytest

from gurarij import io
from gurarij.cli import main
from gurarij.space import linf


@pytest.fixture
def files(tmp_path):
    L1 = linf(1)
    paths = {}
    for name, pieces in [("f", [["1", "1"], ["-1", "1"]]), ("g", [["1", "0"], ["-1", "0"], ["0", "1"]])]:
        p = tmp_path / (name + ".json")
        p.write_text(json.dumps({"space": "linf1", "space_def": io.space_out(L1), "pieces": pieces}))
        paths[name] = str(p)
    p = tmp_path / "linf2.json"
    p.write_text(io.dumps(io.space_out(linf(2))))
    paths["linf2"] = str(p)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dist(files, capsys):
    code, out, _ = run(capsys, "dist", "--type1", files["f"], "--type2", files["g"])
    assert code == 0 and out.strip() == "bracket [1, 1], exact"


def test_smooth(files, capsys):
    assert run(capsys, "smooth", "--space", files["linf2"], "--v", "[1,1/2]")[:2] == (0, "true\n")
    assert run(capsys, "smooth", "--space", files["linf2"], "--v", '["1","1"]')[:2] == (1, "false\n")


def test_malformed_json(files, capsys):
    bad = files["dir"] / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "dist", "--type1", str(bad), "--type2", files["g"])
    assert code == 2
    rep = json.loads(err)
    assert rep["error"] == "ParseError" and "line 1" in rep["message"]


def test_float_rejected(files, capsys):
    code, _, err = run(capsys, "norm", "--space", files["linf2"], "--v", "[0.5, 1]")
    assert code == 2 and "float" in err


def test_bad_config(files, capsys, monkeypatch):
    monkeypatch.setenv("GURARIJ_TOL", "-1")
    code, _, err = run(capsys, "norm", "--space", files["linf2"], "--v", "[1,2]")
    assert code == 2 and "ValidationError" in err


def test_isolate_exit_codes(files, capsys):
    code, out, _ = run(capsys, "isolate", "--type", files["f"])
    assert code == 1 and json.loads(out)["status"] == "NotIsolated"
    code, out, _ = run(capsys, "isolate", "--type", files["g"])
    assert code == 0 and json.loads(out)["status"] == "Isolated"


def test_amalgam_certificate_round_trip(files, capsys):
    argv = ["amalgamate", "--E", "linf1", "--F0", files["linf2"], "--F1", files["linf2"],
            "--f0", '[["1"],["0"]]', "--f1", '[["1"],["0"]]']
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert run(capsys, *argv)[1] == first
    cert = files["dir"] / "am.json"
    cert.write_text(first)
    assert run(capsys, "verify", str(cert))[0] == 0
    d = json.loads(first)
    d["g1"]["matrix"][0][0] = "2"
    cert.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 1 and out.startswith("FAILED")


def test_join_certificate(files, capsys):
    cert = files["dir"] / "j.json"
    code, out, _ = run(capsys, "--out", str(cert), "join", "--E", "linf1", "--F", "linf1",
                       "--a", '[["1"]]', "--b", '[["1"]]', "--eps", '["1/2"]')
    assert code == 0 and cert.read_text().strip() == out.strip()
    assert run(capsys, "verify", str(cert))[0] == 0
    code, _, err = run(capsys, "join", "--E", "linf1", "--F", "linf1",
                       "--a", '[["1"]]', "--b", '[["1/4"]]', "--eps", '["1/2"]')
    assert code == 1 and "ConditionViolated" in err


def test_forge_bundle(files, capsys):
    cat = files["dir"] / "cat.json"
    cat.write_text(json.dumps({"problems": [
        {"name": "e1<linf2", "F": io.space_out(linf(2)), "basis": [["1", "0"]]}]}))
    bundle = files["dir"] / "chain.json"
    code, out, _ = run(capsys, "forge", "run", "--budget", "2", "--catalog", str(cat), "--bundle", str(bundle))
    assert code == 0
    assert "problem,e1<linf2,CERTIFIED,0" in out.splitlines()
    assert run(capsys, "verify", str(bundle))[0] == 0


def test_census_net(capsys):
    code, out, _ = run(capsys, "--seed", "1", "census", "net", "--space", "linf1", "--samples", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "sample,distance,covered" and len(lines) == 5
    assert run(capsys, "--seed", "1", "census", "net", "--space", "linf1", "--samples", "4")[1] == out


def test_usage_error(capsys):
    assert main(["frobnicate"]) == 2
