import csv
import io
import json
import subprocess
import sys

import pytest

from zeroone.cli import main
from zeroone.graph import Graph


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


@pytest.fixture
def k3(tmp_path):
    p = tmp_path / "k3.json"
    p.write_text(Graph.complete(3).to_json())
    return p


def test_eval(run, k3, tmp_path):
    code, out, _ = run("eval", k3, "(exists (x y z) (and (adj x y) (adj y z) (adj x z)))")
    assert code == 0 and json.loads(out) == {"value": True}
    f = tmp_path / "f.zo"
    f.write_text("; neighbours of a\n(adj b a)\n")
    code, out, _ = run("eval", k3, f, "--env", "a=0,b=2", "--method", "tensor")
    assert code == 0 and json.loads(out)["value"] is True
    code, out, _ = run("eval", k3, "(Q conn (x y) (adj x y))", "--trace")
    assert code == 0 and json.loads(out)["trace"][-1]["value"] is True


def test_exit_codes(run, k3, tmp_path):
    assert run("eval", k3, "(adj x")[0] == 2
    assert run("eval", k3, "(Q conn (x y) (adj x a))", "--env", "a=0")[0] == 3
    big = tmp_path / "c80.json"
    big.write_text(Graph.cycle(80).to_json())
    assert run("eval", big, "(Q ham (x y) (adj x y))")[0] == 4
    assert run("eval", tmp_path / "missing.json", "(true)")[0] == 1
    assert run("decide", "(Q ham (x y) (adj x y))")[0] == 1


def test_sample_round_trip(run, tmp_path):
    out = tmp_path / "g.json"
    assert run("sample", "--n", 12, "--p", 0.5, "--seed", 4, "--out", out)[0] == 0
    g = Graph.from_json(out.read_text())
    assert g.n == 12
    run("sample", "--n", 12, "--p", 0.5, "--seed", 4, "--out", tmp_path / "h.json")
    assert (tmp_path / "h.json").read_text() == out.read_text()


def test_probe_csv(run, tmp_path):
    out = tmp_path / "r.csv"
    code, stdout, _ = run("probe", "--formula", "(Q conn (x y) (adj x y))", "--p", 0.5,
                          "--n", "8,16", "--trials", 12, "--seed", 1, "--out", out)
    assert code == 0 and stdout.strip() in ("ConsistentWithOne", "ConsistentWithZero", "Inconclusive")
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["n", "trials", "successes", "estimate", "ci_lo", "ci_hi", "errors"]
    assert [r["n"] for r in rows] == ["8", "16"]


def test_probe_json_with_decider(run):
    code, out, _ = run("probe", "--formula", "(Q conn (x y) (adj x y))", "--p", 0.5,
                       "--n", "20", "--trials", 10, "--decider")
    rep = json.loads(out)
    assert code == 0 and rep["decider_verdict"] == 1


def test_decide(run):
    code, out, _ = run("decide", "(Q chr3 (x y) (adj x y))", "--trace", "--depth", 1)
    d = json.loads(out)
    assert code == 0 and d["verdict"] == 0 and d["trace"]["rule"] == "chr"


def test_testbed_and_check_repr(run, tmp_path):
    g = tmp_path / "tb.json"
    code, out, _ = run("testbed", "--b", 2, "--out", g)
    info = json.loads(out)
    assert code == 0 and info["n"] == 72
    code, out, _ = run("check-repr", g, "--phi0", "(adj x mS)", "--phi1", "(adj x mB)",
                       "--env", info["env"])
    cert = json.loads(out)
    assert cert["valid"] and cert["f_value"] == 2
    code, out, _ = run("check-repr", g, "--S", "0,1")
    assert json.loads(out)["valid"]


def test_encode(run, tmp_path):
    so = tmp_path / "s.so"
    so.write_text("(existsSet (A) (exists (x) (member x A)))")
    out = tmp_path / "enc.zo"
    code, _, _ = run("encode", so, "--phi0", "(adj x mS)", "--phi1", "(adj x mB)", "--out", out)
    assert code == 0 and out.read_text().startswith("(exists")
    tb = tmp_path / "tb.json"
    _, info, _ = run("testbed", "--b", 2, "--out", tb)
    code, res, _ = run("eval", tb, out, "--env", json.loads(info)["env"])
    assert code == 0 and json.loads(res)["value"] is True


def test_nonconv(run, tmp_path):
    out = tmp_path / "nc.zo"
    assert run("nonconv", "--r", 1, "--q", 2, "--threshold", 1, "--out", out)[0] == 0
    assert out.stat().st_size > 1000
    assert run("nonconv", "--r", 1, "--q", 2, "--threshold", 5)[0] == 1


def test_dclass(run, tmp_path):
    g = tmp_path / "k4.json"
    g.write_text(Graph.complete(4).to_json())
    code, out, _ = run("dclass", "--graph", g, "--m", 3)
    assert code == 0 and json.loads(out)["size"] == 4
    code, out, _ = run("dclass", "--n", 1000, "--seeds", 2)
    assert code == 0 and json.loads(out)["seeds"] == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "zeroone.cli", "decide", "(Q conn (x y) (adj x y))"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"] == 1
