import json
import os

import pytest

from ultralab import io as docs
from ultralab.ball_space import enumerate_balls
from ultralab.ballmaps import BallMap
from ultralab.cli import main
from ultralab.core import pquotient
from ultralab.maps import ScalarField
from ultralab.measures import make_measure


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def docdir(tmp_path):
    (tmp_path / "z9.json").write_text(json.dumps({"model": "pquotient", "p": 3, "n": 2}))
    (tmp_path / "q3.json").write_text(json.dumps({"p": 3}))
    for name, c in (("const0.json", "0"), ("constc.json", "9/2")):
        doc = {"ball_domain": "z9.json", "codomain": "q3.json",
               "table": {str(i): c for i in range(13)}}
        (tmp_path / name).write_text(json.dumps(doc))
    return tmp_path


def test_hausdorff_and_dist(capsys, docdir):
    z9 = str(docdir / "z9.json")
    code, out = run(capsys, "hausdorff", "--space", z9, "--a", "0,3,6", "--b", "1,4,7")
    assert code == 0 and json.loads(out)["result"] == "1"
    code, out = run(capsys, "dist", "--space", z9, "--a", "0", "--b", "0")
    assert code == 0 and json.loads(out)["result"] == "0"


def test_beta_of_constants(capsys, docdir):
    code, out = run(capsys, "beta", "--lambda", "1", "--p1", str(docdir / "const0.json"),
                    "--p2", str(docdir / "constc.json"), "--limits")
    doc = json.loads(out)
    assert code == 0 and doc["result"] == "1/9" and doc["schema"] == "ultrametric-lab/1"
    assert set(doc["limits"][k] for k in ("beta0", "beta_inf", "beta_star0", "beta_star_inf")) == {"1/9"}
    code, out = run(capsys, "beta", "--lambda", "2", "--star", "--p1", str(docdir / "const0.json"),
                    "--p2", str(docdir / "constc.json"))
    assert json.loads(out)["result"] == "1/9"


def test_validation_errors_exit_2(capsys, docdir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"model": "explicit", "points": ["a", "b"],
                               "matrix": [["0", "1"], ["2", "0"]]}))
    code, out = run(capsys, "dist", "--space", str(bad), "--a", "a", "--b", "b")
    doc = json.loads(out)
    assert code == 2 and doc["error"]["type"] == "SpaceValidationError"
    code, out = run(capsys, "dist", "--space", str(docdir / "z9.json"), "--a", "0", "--b", "99")
    assert code == 2
    code, out = run(capsys, "beta", "--lambda", "0.5", "--p1", str(docdir / "const0.json"),
                    "--p2", str(docdir / "constc.json"))
    assert code == 2
    code, out = run(capsys, "dist", "--space", str(tmp_path / "missing.json"), "--a", "0", "--b", "0")
    assert code == 2 and "error" in json.loads(out)


def test_other_subcommands(capsys, docdir, tmp_path):
    c0 = str(docdir / "const0.json")
    code, out = run(capsys, "admissibility", "--p1", c0)
    assert code == 0 and json.loads(out)["d_a"] == "0"
    code, out = run(capsys, "omega", "--p1", c0, "--p2", str(docdir / "constc.json"), "--eps", "1")
    assert code == 0 and json.loads(out)["omega_hat"] == "1/9"
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"values": {str(i): str(i) for i in range(9)}, "p": 3}))
    code, out = run(capsys, "bl", "--p1", str(f))
    assert json.loads(out)["result"] == "1"
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"domain": "z9.json", "codomain": "z9.json",
                             "table": {str(i): str((i + 1) % 9) for i in range(9)}}))
    (tmp_path / "z9.json").write_text((docdir / "z9.json").read_text())
    h = tmp_path / "h.json"
    h.write_text(json.dumps({"domain": "z9.json", "codomain": "z9.json",
                             "table": {str(i): str(i) for i in range(9)}}))
    code, out = run(capsys, "rho", "--p1", str(g), "--p2", str(h), "--metric", "H")
    doc = json.loads(out)
    assert doc["result"] == "1" and set(doc["all"].values()) == {"1"}


def test_measure_commands(capsys, tmp_path):
    for name, a in (("d0.json", 0), ("d2.json", 2)):
        docs.write_json(str(tmp_path / name), docs.measure_doc(make_measure("dirac", 2, 2, a=a)))
    m1, m2 = str(tmp_path / "d0.json"), str(tmp_path / "d2.json")
    code, out = run(capsys, "measure", "dudley", "--m1", m1, "--m2", m2, "--mode", "exact_small",
                    "--mv", "3")
    doc = json.loads(out)
    assert code == 0 and (doc["exact"], doc["lower"], doc["upper"]) == ("1/2", "1/4", "1")
    code, out = run(capsys, "measure", "norm", "--m1", m1)
    assert json.loads(out)["result"] == "1"
    f = tmp_path / "chi.json"
    f.write_text(json.dumps({"values": {"0": "1", "1": "0"}, "p": 2}))
    code, out = run(capsys, "measure", "integrate", "--m1", m1, "--f", str(f))
    assert code == 0 and json.loads(out)["result"] == "1"


def test_lift_writes_reparseable_space(capsys, docdir, tmp_path):
    out_path = tmp_path / "lifted.json"
    code, out = run(capsys, "lift", "--space", str(docdir / "z9.json"), "--depth", "2",
                    "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    L = docs.load_space(str(out_path))
    assert len(L) == json.loads(out)["points"] and L.is_ultrametric
    assert docs.space_doc(L) == doc


def test_document_round_trips(tmp_path):
    bs = enumerate_balls(pquotient(3, 2))
    P = BallMap(bs, ScalarField(3), [f"{i}/2" for i in range(13)])
    path = tmp_path / "P.json"
    docs.write_json(str(path), docs.ballmap_doc(P))
    assert docs.load_ballmap(str(path)) == P
    Q = BallMap(bs, bs.base, [min(b.members) for b in bs.balls])
    docs.write_json(str(path), docs.ballmap_doc(Q))
    assert docs.load_ballmap(str(path)) == Q
    f = Q.as_point_map()
    mu = make_measure("random", 2, 2, seed=1)
    docs.write_json(str(path), docs.measure_doc(mu))
    assert docs.load_measure(str(path)) == mu
    from ultralab.maps import PointMap
    g = PointMap(bs.base, bs.base, [(x * 2) % 9 for x in range(9)])
    docs.write_json(str(path), docs.map_doc(g))
    assert docs.load_map(str(path)) == g
    assert len(f.table) == 13


def test_verify_zero_trials(capsys):
    code, out = run(capsys, "verify", "--trials", "0")
    doc = json.loads(out)
    assert code == 0 and doc["claims"] == [] and doc["schema"] == "ultrametric-lab/1"


def test_verify_negative_control(capsys, tmp_path):
    code, out = run(capsys, "verify", "--inject-bug", "--claims", "ball-hausdorff-formula",
                    "--out", str(tmp_path))
    doc = json.loads(out)
    row = doc["claims"][0]
    assert code == 1 and row["result"] == "fail"
    witness = json.loads(open(row["witness"]).read())
    assert witness["claim"] == "ball-hausdorff-formula"
    assert {"ball1", "ball2"} <= set(witness["payload"])
    assert os.path.exists(tmp_path / "report.json")


def test_verify_csv_and_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("LAB_WORKERS", "2")
    trials = "non-admissible-chain-map=5,bl-norm-algebra=5"
    spec = ",".join(["non-admissible-chain-map", "bl-norm-algebra"])
    code, out = run(capsys, "verify", "--trials", trials, "--claims", spec, "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "claim,trials,checks,result,witness"
    assert [l.split(",")[0] for l in lines[1:]] == ["non-admissible-chain-map", "bl-norm-algebra"]
