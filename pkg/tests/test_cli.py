from __future__ import annotations

import csv
import json
import time

import mpmath
import pytest

from hubbard_geometry import cli
from hubbard_geometry.elliptic import ThetaContext

from conftest import PREC, TOL


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pass_exit_zero(capsys):
    code, out, _ = _run(["--suite", "curves", "--samples", "2"], capsys)
    assert code == cli.EXIT_PASS
    report = json.loads(out)
    assert report["overall"] == "pass"
    assert report["schema_version"] == 1
    names = [c["name"] for c in report["checks"]]
    assert names == sorted(names) and len(names) == len(set(names))
    assert all(c["anchor"] for c in report["checks"])


def test_failure_exit_one(capsys):
    code, out, err = _run(["--suite", "elliptic", "--samples", "2", "--tolerance-exponent", "400"], capsys)
    assert code == cli.EXIT_FAIL
    assert json.loads(out)["overall"] == "fail"
    assert "did not meet expectation" in err


@pytest.mark.parametrize("argv", [
    ["--precision", "32"],
    ["--samples", "0"],
    ["--u", "0"],
    ["--u", "4i"],
    ["--u", "banana"],
])
def test_usage_exit_two(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == cli.EXIT_USAGE and "error" in err


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--suite", "nonsense"])
    assert exc.value.code == cli.EXIT_USAGE


def test_bad_environment_value(monkeypatch, capsys):
    monkeypatch.setenv("HUBGEO_PRECISION", "lots")
    code, _, err = _run(["--suite", "curves"], capsys)
    assert code == cli.EXIT_USAGE and "HUBGEO_PRECISION" in err


def test_byte_identical_reports(tmp_path, capsys):
    argv = ["--suite", "elliptic", "--suite", "rmatrix", "--samples", "3", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_seed_changes_samples(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["--suite", "elliptic", "--samples", "3", "--seed", "1", "--out", str(a)])
    cli.main(["--suite", "elliptic", "--samples", "3", "--seed", "2", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_environment_and_flag_precedence(monkeypatch, capsys):
    monkeypatch.setenv("HUBGEO_PRECISION", "192")
    monkeypatch.setenv("HUBGEO_U", "2,1+i")
    monkeypatch.setenv("HUBGEO_SAMPLES", "2")
    code, out, _ = _run(["--suite", "curves"], capsys)
    conf = json.loads(out)["config"]
    assert code == 0 and conf["precision_bits"] == 192 and len(conf["U_list"]) == 2
    code, out, _ = _run(["--suite", "curves", "--precision", "128"], capsys)
    assert json.loads(out)["config"]["precision_bits"] == 128


def test_mutations_show_controlled_failures(capsys):
    code, out, _ = _run(["--suite", "rmatrix", "--samples", "2", "--mutations"], capsys)
    report = json.loads(out)
    controls = [c for c in report["checks"] if c["expected"] == "fail"]
    assert code == 0 and report["overall"] == "pass"
    assert {c["name"] for c in controls} >= {f"rmatrix.quadric_Q{k}_mutated" for k in range(1, 6)}
    assert all(c["status"] == "fail" for c in controls)


def test_no_mutations_by_default(capsys):
    _, out, _ = _run(["--suite", "rmatrix", "--samples", "2"], capsys)
    assert all(c["expected"] == "pass" for c in json.loads(out)["checks"])


def test_timings_only_on_request(capsys):
    _, out, _ = _run(["--suite", "curves", "--samples", "2"], capsys)
    assert all("runtime_s" not in c for c in json.loads(out)["checks"])
    _, out, _ = _run(["--suite", "curves", "--samples", "2", "--timings"], capsys)
    assert all("runtime_s" in c for c in json.loads(out)["checks"])


def test_curves_suite_default_config_fast(capsys):
    start = time.monotonic()
    code, _, _ = _run(["--suite", "curves"], capsys)
    assert code == 0 and time.monotonic() - start < 60


def test_jobs_match_sequential(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["--suite", "curves", "--suite", "elliptic", "--samples", "2"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


# --- weight tables ----------------------------------------------------------------


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_emit_header_and_origin(tmp_path, capsys):
    path = tmp_path / "w.csv"
    assert cli.main(["--emit-weights", str(path), "--u", "2", "--grid", "3"]) == 0
    rows = _read(path)
    assert list(rows[0].keys()) == list(cli.CSV_COLUMNS)
    origin = [r for r in rows if mpmath.mpf(r["λ_re"]) == 0 and mpmath.mpf(r["λ_im"]) == 0]
    assert len(origin) == 1
    r = origin[0]
    assert complex(r["xc"]) == 1 and complex(r["yc"]) == 0 and complex(r["thc"]) == 1
    assert float(r["curve_residual"]) == 0
    assert "," not in r["λ_re"]


def test_emit_zero_coupling_is_cosine(tmp_path):
    path = tmp_path / "w.csv"
    assert cli.main(["--emit-weights", str(path), "--u", "0", "--grid", "5"]) == 0
    with mpmath.workprec(PREC):
        for r in _read(path):
            lam = mpmath.mpc(r["λ_re"], r["λ_im"])
            xc = mpmath.mpc(*(mpmath.mpf(v) for v in _split(r["xc"])))
            assert abs(xc - mpmath.cos(lam)) < TOL


def _split(z: str):
    z = z.rstrip("j")
    k = max(z.rfind("+"), z.rfind("-", 1))
    while z[k - 1] in "eE":
        k = max(z.rfind("+", 0, k - 1), z.rfind("-", 1, k - 1))
    return z[:k], z[k:]


def test_emit_crossing_pairs_swap(tmp_path):
    U = 2
    with mpmath.workprec(PREC):
        K = ThetaContext.for_coupling(U, PREC).K
        lams = [mpmath.mpf(1) / 3 + mpmath.mpc(0, 1) / 7, K - (mpmath.mpf(1) / 3 + mpmath.mpc(0, 1) / 7)]
    path = tmp_path / "w.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        assert cli.emit_weights(lams, U, fh, PREC) == 0
    r1, r2 = _read(path)
    with mpmath.workprec(PREC):
        x1 = mpmath.mpc(*map(mpmath.mpf, _split(r1["xc"])))
        y1 = mpmath.mpc(*map(mpmath.mpf, _split(r1["yc"])))
        x2 = mpmath.mpc(*map(mpmath.mpf, _split(r2["xc"])))
        y2 = mpmath.mpc(*map(mpmath.mpf, _split(r2["yc"])))
        assert abs(x1 - y2) < TOL and abs(y1 - x2) < TOL


def test_emit_pole_flagged_not_dropped(tmp_path):
    U = 2
    with mpmath.workprec(PREC):
        ctx = ThetaContext.for_coupling(U, PREC)
        pole = mpmath.mpc(0, 1) * ctx.Kp
        lams = [mpmath.mpf(0), pole]
    path = tmp_path / "w.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        assert cli.emit_weights(lams, U, fh, PREC) == 1
    rows = _read(path)
    assert [r["flag"] for r in rows] == ["ok", "pole"]


def test_emit_full_precision_digits(tmp_path):
    path = tmp_path / "w.csv"
    cli.main(["--emit-weights", str(path), "--u", "3", "--grid", "2", "--precision", "256"])
    digits = max(len(_split(r["xc"])[0].lstrip("-").replace(".", "").split("e")[0]) for r in _read(path))
    assert digits >= 70
