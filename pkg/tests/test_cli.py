import io
import json

import numpy as np
import pytest

from crisscross import analysis, cli, codec, gabidulin
from crisscross.channel import ChannelPattern


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def test_params_json():
    code, out = run("params", "--n", "64", "--t", "1", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["message_capacity"] == 3694 and d["r_w"] == 12


def test_params_errors():
    assert run("params", "--n", "16")[0] == 2
    assert run("params", "--n", "128", "--t", "2", "--ell", "5")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("roundtrip", "--trials", "0")[0] == 2


def test_roundtrip_deterministic(tmp_path):
    args = ("roundtrip", "--n", "64", "--t", "1", "--trials", "3", "--mode", "both", "--seed", "7")
    code, out = run(*args, "--report", str(tmp_path / "r.jsonl"))
    assert code == 0
    assert out == run(*args)[1]
    assert (tmp_path / "r.jsonl").read_text() == out
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 7 and lines[-1]["successes"] == 6 and lines[-1]["success_rate"] == 1.0


def test_roundtrip_pattern_file(tmp_path):
    f = tmp_path / "p.jsonl"
    good = ChannelPattern("deletion", [3], [])
    bad = ChannelPattern("deletion", [3, 4], [])  # exceeds t
    f.write_text(good.to_json() + "\n")
    assert run("roundtrip", "--pattern-source", "file", "--patterns", str(f))[0] == 0
    f.write_text(good.to_json() + "\n" + bad.to_json() + "\n")
    code, out = run("roundtrip", "--pattern-source", "file", "--patterns", str(f))
    assert code == 3
    assert json.loads(out.splitlines()[-1])["successes"] == 1
    f.write_text("{not json\n")
    assert run("roundtrip", "--pattern-source", "file", "--patterns", str(f))[0] == 4
    assert run("roundtrip", "--pattern-source", "file", "--patterns", str(tmp_path / "missing"))[0] == 4
    assert run("roundtrip", "--pattern-source", "file")[0] == 2


def test_roundtrip_codeword_file(tmp_path):
    p, gab = codec.make_params(64, 1), gabidulin.build(64, 1)
    X = codec.encode(p, gab, np.zeros(codec.message_capacity(p), dtype=np.uint8))
    path = tmp_path / "x.txt"
    X.save(path)
    assert run("roundtrip", "--codeword", str(path), "--trials", "2")[0] == 0
    path.write_text("not an array\n")
    assert run("roundtrip", "--codeword", str(path))[0] == 4


def test_bounds_csv_and_json():
    code, out = run("bounds", "--n-list", "64", "--t-list", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,t,lower,construction_upper,cardinality_upper_log2"
    assert float(out.splitlines()[1].split(",")[2]) == 139.0
    assert run("bounds", "--n-list", "64,x")[0] == 2


def test_equivalence():
    code, out = run("equivalence", "--shape", "2x2", "--pairs", "50")
    assert code == 0 and json.loads(out)["counterexamples"] == 0
    code, out = run("equivalence", "--shape", "2x2", "--exhaustive")
    assert code == 0 and json.loads(out)["pairs_tested"] == 16 * 17 // 2
    assert run("equivalence", "--shape", "3by3")[0] == 2
    assert run("equivalence", "--shape", "6x6", "--exhaustive")[0] == 2


def test_equivalence_counterexample_exit(monkeypatch):
    fake = analysis.EquivalenceSummary((2, 2), 1, 1, 1, 0, (np.zeros((2, 2)), np.ones((2, 2))))
    monkeypatch.setattr(analysis, "equivalence_sweep", lambda *a, **k: fake)
    assert run("equivalence", "--shape", "2x2", "--pairs", "1")[0] == 5


def test_selftest(monkeypatch):
    code, out = run("selftest")
    assert code == 0 and json.loads(out)["passed"]
    import crisscross.window as window

    monkeypatch.setattr(window, "rank", lambda block: -1)
    code, out = run("selftest")
    assert code == 1 and json.loads(out)["checks"]["window"] is False
