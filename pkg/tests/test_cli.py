import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import GUE_MOMENTS
from janossy import _io, cli


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    lines = text.splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    return meta, body[0].split(","), [r.split(",") for r in body[1:]]


def test_empty_interval_single_row(capsys):
    code, out, _ = run(["janossy", "--a1", "0:0:1", "--a2", "0:0:1"], capsys)
    assert code == 0
    meta, cols, rows = parse(out)
    assert cols == ["a1", "a2", "lnJ", "J", "method"]
    assert rows == [["0", "0", "0", "1", "tw"]]


def test_cross_check_grid(capsys):
    code, out, err = run(["janossy", "--a1", "-4:0:5", "--a2", "0:4:5", "--cross-check"], capsys)
    assert code == 0
    meta, cols, rows = parse(out)
    assert len(rows) == 50
    assert sorted({r[4] for r in rows}) == ["nystrom", "tw"]
    dev = float([m for m in meta if m.startswith("# max_rel_dev=")][0].split("=")[1])
    assert dev <= 1e-6
    assert "max |dJ/J|" in err


def test_unit_mean_coordinates(capsys):
    _, out, _ = run(["janossy", "--a1", "-3.14159265358979312:0:2", "--a2", "0:3.14159265358979312:2",
                     "--units", "unit-mean"], capsys)
    _, _, rows = parse(out)
    assert {float(r[0]) for r in rows} == {-1.0, 0.0}
    assert {float(r[1]) for r in rows} == {0.0, 1.0}


@pytest.mark.parametrize("args", [
    ["janossy", "--a1", "0:1", "--a2", "0:0:1"],
    ["janossy", "--a1", "1:0:3", "--a2", "0:0:1"],
    ["janossy", "--a1", "a:b:c", "--a2", "0:0:1"],
    ["janossy", "--a1", "0:1:1", "--a2", "0:0:1"],
    ["moments", "--tol", "1e-3"],
    ["moments", "--a-max", "50"],
    ["moments", "--threads", "0"],
    ["densities", "joint", "--grid", "0:1:3"],
    ["densities", "spacing"],
    ["zeta", "--file", "x.txt"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(args)
    assert info.value.code == 2


def test_invalid_value_exit_2(capsys):
    code, _, err = run(["janossy", "--a1", "1:2:2", "--a2", "0:0:1"], capsys)
    assert code == 2 and "a1 <= 0" in err


def test_numeric_failure_exit_1(tmp_path, capsys):
    p = tmp_path / "z.txt"
    p.write_text("\n".join(str(20.0 + i) for i in range(100)) + "\n19.0\n" + "\n".join(str(200.0 + i) for i in range(100)))
    code, _, err = run(["zeta", "--file", str(p), "--window", "1:150", "--bins", "5"], capsys)
    assert code == 1 and "line 101" in err


def test_moments(capsys):
    code, out, _ = run(["moments", "--kmax", "4"], capsys)
    _, cols, rows = parse(out)
    assert cols == ["k", "moment", "est_error"]
    np.testing.assert_allclose([float(r[1]) for r in rows], GUE_MOMENTS, atol=1e-5)


def test_moment_cache(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("JANOSSY_CACHE_DIR", str(tmp_path / "cache"))
    _, first, _ = run(["moments", "--kmax", "2"], capsys)
    assert len(list((tmp_path / "cache").iterdir())) == 1
    _, second, _ = run(["moments", "--kmax", "2"], capsys)
    assert first == second


def test_surmise(capsys):
    _, out, _ = run(["surmise", "--beta", "2"], capsys)
    _, cols, rows = parse(out)
    assert cols == ["k", "exact", "surmise", "gap"]
    assert float(rows[0][3]) > 1e-3


def test_densities_spacing_units(capsys):
    _, a, _ = run(["densities", "spacing", "--grid", "0.5:3:6"], capsys)
    _, b, _ = run(["densities", "spacing", "--grid", "0.5:3:6", "--units", "unit-mean"], capsys)
    ra, rb = parse(a)[2], parse(b)[2]
    for x, y in zip(ra, rb):
        assert float(y[0]) == pytest.approx(float(x[0]) / math.pi, rel=1e-15)
        assert float(y[1]) == pytest.approx(float(x[1]) * math.pi, rel=1e-15)


def test_densities_joint(capsys):
    _, out, _ = run(["densities", "joint", "--a1", "-2:-1:2", "--a2", "1:2:2"], capsys)
    _, cols, rows = parse(out)
    assert cols == ["a1", "a2", "density"] and len(rows) == 4
    assert [(float(r[0]), float(r[1])) for r in rows] == [(-2, 1), (-2, 2), (-1, 1), (-1, 2)]


def test_mc_byte_identical(tmp_path, capsys):
    args = ["mc", "--n", "20", "--dim", "200", "--bulk", "0.25", "--seed", "7", "--bins", "10"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["-o", str(a), "--hist", str(tmp_path / "h.csv")]) == 0
    assert cli.main(args + ["-o", str(b), "--threads", "3"]) == 0
    # threads are not part of the recorded config, so outputs match byte for byte
    assert a.read_bytes() == b.read_bytes()
    assert "seed=7" in a.read_text().splitlines()[0]
    _, cols, rows = parse((tmp_path / "h.csv").read_text())
    assert cols == ["bin_lo", "bin_hi", "count", "density", "expected"] and len(rows) == 10


def test_json_and_csv_agree(tmp_path):
    args = ["janossy", "--a1", "-2:0:3", "--a2", "0:3:3", "--cross-check"]
    assert cli.main(args + ["-o", str(tmp_path / "o.csv")]) == 0
    assert cli.main(args + ["-o", str(tmp_path / "o.json"), "--format", "json"]) == 0
    _, cols, rows = _io.read_csv(tmp_path / "o.csv")
    doc = json.loads((tmp_path / "o.json").read_text())
    assert doc["columns"] == cols
    assert doc["version"] == "0.1.0" and doc["config"]["command"] == "janossy"
    for r, j in zip(rows, doc["rows"]):
        assert r == j


def test_zeta_windows_and_fit(zeros_1e5, tmp_path):
    out = tmp_path / "w.csv"
    code = cli.main(["zeta", "--file", str(zeros_1e5), "--window", "1:100000", "--bins", "10", "-o", str(out)])
    assert code == 0
    _, cols, rows = _io.read_csv(out)
    assert tuple(cols) == ("window_label", "N", "gamma_N", "rho_bar", "k", "moment", "jackknife_err")
    assert len(rows) == 4 and rows[0][1] == 1.0
    code = cli.main(["zeta", "--file", str(zeros_1e5), "--window", "1:50000", "--window", "50001:50000",
                     "-o", str(out)])
    assert code == 0
    _, cols, rows = _io.read_csv(tmp_path / "w_fit.csv")
    assert tuple(cols) == ("k", "slope", "intercept", "chi2", "slope_proportional", "chi2_proportional")
    assert len(rows) == 4


def test_zeta_index_window_option(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("\n".join(f"{100.0 + 0.7 * i + 0.1 * math.sin(i * i):.9f}" for i in range(3000)) + "\n")
    out = tmp_path / "w.csv"
    assert cli.main(["zeta", "--file", str(p), "--near-index", "1000", "--first-index", "1", "-o", str(out),
                     "--bins", "2"]) == 1  # 3 zeros cannot fill the bins
    assert cli.main(["zeta", "--file", str(p), "--window", "100:2000", "-o", str(out)]) == 0
    _, _, rows = _io.read_csv(out)
    assert rows[0][1] == 100.0


def test_zeta_convert(tmp_path, capsys):
    src = tmp_path / "idx.txt"
    src.write_text("1 14.134725142\n2 21.022039639\n3 25.010857580\n")
    code, _, err = run(["zeta-convert", str(src), str(tmp_path / "o.txt")], capsys)
    assert code == 0 and "3 ordinates" in err


def test_repro(tmp_path):
    assert cli.main(["repro", "--outdir", str(tmp_path), "--units", "unit-mean"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig1_janossy.csv", "fig1_joint.csv", "fig2_ratio_tilde.csv", "moments.csv"]
    meta, cols, rows = _io.read_csv(tmp_path / "moments.csv")
    np.testing.assert_allclose([r[1] for r in rows], GUE_MOMENTS, atol=1e-5)


def test_console_script_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "janossy.cli", "janossy", "--a1", "0:0:1", "--a2", "0:0:1"],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and ok.stdout.startswith("# janossy 0.1.0 config=")
    bad = subprocess.run([sys.executable, "-m", "janossy.cli", "janossy", "--a1", "oops", "--a2", "0:0:1"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
