import json
import math

import pytest

from gaborpr.cli import main, parse_real


def run(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def load(path):
    return json.loads(path.read_text())


@pytest.mark.parametrize(
    "text,value",
    [("pi/4", math.pi / 4), ("-pi/2", -math.pi / 2), ("2*pi/3", 2 * math.pi / 3), ("3pi/4", 3 * math.pi / 4), ("0.25", 0.25), ("pi", math.pi)],
)
def test_parse_real(text, value):
    assert parse_real(text) == value


def test_parse_real_rejects_garbage():
    with pytest.raises(Exception):
        parse_real("pie")


def test_gen_set_lattice(tmp_path):
    code, out = run(tmp_path, "s.json", "gen-set", "--kind", "sqrt-lattice", "--a", "1", "--b", "1", "--radius", "1")
    assert code == 0
    d = load(out)
    assert set(d) == {"header", "config", "result"}
    assert len(d["result"]["points"]) == 5
    assert d["config"]["a"] == 1.0


def test_gen_set_csv(tmp_path):
    code, out = run(tmp_path, "s.csv", "gen-set", "--kind", "sqrt-lattice", "--a", "1", "--b", "1", "--radius", "1", "--format", "csv")
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,w" and len(lines) == 6


def test_gen_set_parallel_needs_anchors(tmp_path, capsys):
    code, _ = run(tmp_path, "s.json", "gen-set", "--kind", "parallel-lines", "--theta0", "0", "--a", "1", "--radius", "3")
    assert code != 0
    assert "anchors" in capsys.readouterr().err


def test_gen_set_angle_flag(tmp_path):
    for theta2 in ("0.7853981633974483", "pi/4"):
        code, out = run(
            tmp_path, "s.json", "gen-set", "--kind", "intersecting-lines", "--theta1", "0", "--theta2", theta2, "--a", "1", "--radius", "2"
        )
        assert code == 0
        flag = load(out)["result"]["flags"]["angle_over_pi"]
        assert flag["rational"] and abs(flag["p"]) == 1 and flag["q"] == 4


def test_counterexample_lattice(tmp_path):
    code, out = run(tmp_path, "p.json", "counterexample", "--kind", "lattice", "--a", "2", "--b", "2")
    assert code == 0
    res = load(out)["result"]
    assert res["provenance"].startswith("square-root lattice chirp")
    assert res["q"]["kind"] == "chirp-exp"


def test_counterexample_lattice_rejected(tmp_path, capsys):
    code, _ = run(tmp_path, "p.json", "counterexample", "--kind", "lattice", "--a", "0.5")
    assert code != 0
    assert "no admissible c" in capsys.readouterr().err


def test_counterexample_separable(tmp_path):
    code, out = run(tmp_path, "p.json", "counterexample", "--kind", "separable", "--a", "2", "--b", "2", "--extra", "gaussian")
    assert code == 0
    res = load(out)["result"]
    assert res["f1"]["dim"] == 2 and res["intended"]["kind"] == "product"


@pytest.mark.parametrize(
    "argv",
    [
        ["--kind", "intersect", "--theta1", "0.3", "--theta2", "-0.2", "--a", "1.5", "--case", "cos"],
        ["--kind", "intersect", "--theta1", "2*pi/3", "--theta2", "0", "--a", "1"],
        ["--kind", "parallel", "--theta0", "0", "--anchors", "1,0;1.5,0;0,0", "--a", "1"],
        ["--kind", "parallel", "--theta0", "0", "--anchors", "1.2,0;2.4,0;0,0", "--a", "1.2", "--chirp"],
        ["--kind", "low-density", "--a", "1", "--nu", "0.7", "--radius", "20"],
    ],
)
def test_counterexample_kinds(tmp_path, argv):
    code, out = run(tmp_path, "p.json", "counterexample", *argv)
    assert code == 0
    assert load(out)["result"]["q"] is not None


def test_verify_and_strict(tmp_path):
    _, pair = run(tmp_path, "p.json", "counterexample", "--kind", "lattice", "--a", "2", "--b", "2")
    _, own = run(tmp_path, "own.json", "gen-set", "--kind", "sqrt-lattice", "--a", "2", "--b", "2", "--radius", "6")
    _, fine = run(tmp_path, "fine.json", "gen-set", "--kind", "sqrt-lattice", "--a", "0.8", "--b", "0.8", "--radius", "4")
    code, rep = run(tmp_path, "r.json", "verify", "--pair", str(pair), "--set", str(own), "--tol", "1e-9")
    assert code == 0 and load(rep)["result"]["flags"]["counterexample_certified"]
    code, rep = run(tmp_path, "r2.json", "verify", "--pair", str(pair), "--set", str(fine))
    assert code == 0 and not load(rep)["result"]["flags"]["counterexample_certified"]
    code, _ = run(tmp_path, "r3.json", "verify", "--pair", str(pair), "--set", str(fine), "--strict")
    assert code == 2


def test_verify_incompatible(tmp_path):
    _, pair = run(tmp_path, "p.json", "counterexample", "--kind", "lattice", "--a", "2", "--b", "2")
    _, line = run(tmp_path, "l.json", "gen-set", "--kind", "root-line", "--a", "1", "--radius", "3")
    code, _ = run(tmp_path, "r.json", "verify", "--pair", str(pair), "--set", str(line))
    assert code == 1


def test_density_csv(tmp_path):
    _, s = run(tmp_path, "s.json", "gen-set", "--kind", "sqrt-lattice", "--a", "1", "--b", "1", "--radius", "3")
    code, out = run(tmp_path, "d.csv", "density", "--set", str(s), "--rmin", "10", "--rmax", "1000", "--steps", "20")
    assert code == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "r,count,slope" and len(rows) == 21
    assert abs(float(rows[-1].split(",")[2]) - 4) < 0.1


def test_probe_deterministic(tmp_path):
    _, s = run(tmp_path, "s.json", "gen-set", "--kind", "sqrt-lattice", "--a", "0.8", "--b", "0.8", "--radius", "5")
    args = ["probe", "--set", str(s), "--dim", "3", "--restarts", "3", "--seed", "7", "--max-iter", "200"]
    code, a = run(tmp_path, "a.json", *args)
    assert code == 0
    _, b = run(tmp_path, "b.json", *args, "--threads", "2")
    ra, rb = load(a), load(b)
    assert ra["result"] == rb["result"]
    assert {k: v for k, v in ra["config"].items() if k != "out"} == {k: v for k, v in rb["config"].items() if k != "out"}
    assert len(ra["result"]["runs"]) == 3


def test_probe_from_measurements(tmp_path):
    from gaborpr.sampling import sqrt_lattice
    from gaborpr.signals import gaussian
    from gaborpr.transforms import magnitude_samples

    csv = tmp_path / "m.csv"
    csv.write_text(magnitude_samples(gaussian(), sqrt_lattice(0.8, 0.8, 4)).to_csv())
    code, out = run(tmp_path, "p.json", "probe", "--measurements", str(csv), "--dim", "2", "--restarts", "2")
    assert code == 0
    assert load(out)["result"]["objective"] <= 1e-12


def test_report(tmp_path):
    _, pair = run(tmp_path, "p.json", "counterexample", "--kind", "lattice", "--a", "2", "--b", "2")
    _, s = run(tmp_path, "s.json", "gen-set", "--kind", "sqrt-lattice", "--a", "2", "--b", "2", "--radius", "4")
    _, rep = run(tmp_path, "r.json", "verify", "--pair", str(pair), "--set", str(s))
    code, md = run(tmp_path, "report.md", "report", str(pair), str(s), str(rep))
    assert code == 0
    text = md.read_text()
    assert "counterexample_certified: True" in text and "set: sqrt-lattice" in text
    code, csv = run(tmp_path, "plot.csv", "report", "--pair", str(pair), "--set", str(s))
    assert code == 0
    rows = csv.read_text().strip().splitlines()
    assert rows[0] == "t,w,abs_v1,abs_v2"
    for row in rows[1:]:
        *_, v1, v2 = map(float, row.split(","))
        assert abs(v1 - v2) <= 1e-9 * max(v1, v2, 1e-300)


def test_report_needs_inputs(tmp_path):
    code, _ = run(tmp_path, "r.md", "report")
    assert code == 1


def test_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("GPR_THREADS", "3")
    _, s = run(tmp_path, "s.json", "gen-set", "--kind", "sqrt-lattice", "--a", "0.8", "--b", "0.8", "--radius", "3")
    code, _ = run(tmp_path, "p.json", "probe", "--set", str(s), "--dim", "2", "--restarts", "3", "--max-iter", "50")
    assert code == 0
