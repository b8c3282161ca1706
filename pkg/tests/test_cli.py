import json

import numpy as np
import pytest

from benfordkit.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main, read_column


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def benford_csv(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, _, _ = run(["sample", "--family", "uexp:10:0:1", "-n", "200000", "--seed", "4", "-o", str(path)], capsys)
    assert code == EXIT_OK
    return path


def test_sample_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["sample", "--family", "uexp:10:0:1", "-n", "100", "--seed", "9", "-o", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    side = json.loads((tmp_path / "a.json").read_text())
    assert side["rank"] is None and side["spectrum"]["bases"][0] == 10.0


def test_sample_lattice_rank(tmp_path, capsys):
    p = tmp_path / "l.csv"
    assert run(["sample", "--family", "lattice:1/2:0.5,1/3:0.5", "-n", "50", "-o", str(p)], capsys)[0] == 0
    assert json.loads((tmp_path / "l.json").read_text())["rank"] == 6
    vals = np.loadtxt(p)
    assert set(np.round(vals, 12)) <= {0.5, round(1 / 3, 12)}


def test_sample_fejer_round_trip(tmp_path, capsys):
    p = tmp_path / "f.csv"
    assert run(["sample", "--family", "fejer:10", "-n", "300000", "-o", str(p)], capsys)[0] == 0
    code, out, err = run(["analyze", str(p), "--base", "5"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verdict"] == "benford"
    ing = rep["ingestion"]
    assert ing["rows_used"] + ing["rows_dropped_out_of_range"] == 300000


def test_sample_bad_spec(tmp_path, capsys):
    code, _, err = run(["sample", "--family", "uexp:10", "-n", "5", "-o", str(tmp_path / "x.csv")], capsys)
    assert code == EXIT_USAGE and "bad family" in err


def test_analyze_benford(benford_csv, tmp_path, capsys):
    hist = tmp_path / "h.tsv"
    code, out, _ = run(["analyze", str(benford_csv), "--hist-tsv", str(hist), "--strict"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verdict"] == "benford"
    assert any("arbitrary" in n for n in rep["notes"])
    lines = hist.read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 10
    assert all(len(ln.split("\t")) == 3 for ln in lines[1:])


@pytest.mark.parametrize("uexp", ["uexp:10:0:1", "uexp:10:0:2", "uexp:7:1:4", "uexp:2.5:-1:0"])
def test_round_trip_native_base(uexp, tmp_path, capsys):
    p = tmp_path / "u.csv"
    run(["sample", "--family", uexp, "-n", "100000", "-o", str(p)], capsys)
    beta = uexp.split(":")[1]
    code, out, _ = run(["analyze", str(p), "--base", beta, "--strict"], capsys)
    assert code == EXIT_OK, out
    assert json.loads(out)["verdict"] == "benford"


def test_analyze_non_integer_base(tmp_path, capsys):
    p = tmp_path / "u2.csv"
    run(["sample", "--family", "uexp:10:0:2", "-n", "200000", "-o", str(p)], capsys)
    rep = json.loads(run(["analyze", str(p), "--base", "4.64159"], capsys)[1])
    assert rep["verdict"] == "benford" and rep["digits"] is None


def test_analyze_constant_column(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("value\n100\n100\n100\n")
    code, out, _ = run(["analyze", str(p), "--strict"], capsys)
    rep = json.loads(out)
    assert code == EXIT_FAIL
    assert rep["verdict"] == "nonconforming" and rep["ks"] == 1.0


def test_analyze_errors(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "missing.csv")], capsys)[0] == EXIT_IO
    p = tmp_path / "neg.csv"
    p.write_text("x\n-1\n0\nabc\n")
    code, _, err = run(["analyze", str(p)], capsys)
    assert code == EXIT_IO and "no usable" in err
    q = tmp_path / "ok.csv"
    q.write_text("1\n2\n")
    assert run(["analyze", str(q), "--base", "1"], capsys)[0] == EXIT_USAGE
    assert run(["analyze", str(q), "--base", "0.5"], capsys)[0] == EXIT_USAGE
    assert run(["analyze", str(q), "--column", "nope"], capsys)[0] == EXIT_USAGE
    assert run(["analyze", str(q), "--base", "4.5", "--hist-tsv", str(tmp_path / "h")], capsys)[0] == EXIT_USAGE


def test_ingestion_counts(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,name,amount\n1,a,5\n2,b,-3\n3,c,\n4,d,1e-5000\n5,e,1e400\n6,f,2.5E3\n7,g,0\n8,h,1_000\n9\n")
    vals, s = read_column(p, "amount")
    assert s.header and s.column == "amount"
    np.testing.assert_array_equal(vals, [5.0, 2500.0])
    assert s.rows_read == 9
    assert s.rows_dropped_nonpositive == 2
    assert s.rows_dropped_out_of_range == 2
    assert s.rows_dropped_unparseable == 3
    assert s.rows_used + s.rows_dropped_nonpositive + s.rows_dropped_unparseable + s.rows_dropped_out_of_range == s.rows_read
    vals2, s2 = read_column(p, "2")
    assert s2.rows_used == 2


def test_headerless_first_column(tmp_path):
    p = tmp_path / "n.csv"
    p.write_text("3.5,x\n4,y\n")
    vals, s = read_column(p)
    assert not s.header and list(vals) == [3.5, 4.0]


def test_spectrum_family(tmp_path, capsys):
    tsv = tmp_path / "s.tsv"
    code, out, _ = run(["spectrum", "--family", "uexp:10:0:2", "--range", "2", "120", "--tsv", str(tsv)], capsys)
    assert code == EXIT_OK
    est = json.loads(out)
    for b in (100, 10, 10 ** (2 / 3), 10**0.5):
        assert any(abs(d - b) < 1e-4 for d in est["detected"])
    lines = tsv.read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 2001


def test_spectrum_fejer_flat(capsys):
    est = json.loads(run(["spectrum", "--family", "fejer:10", "--range", "1.5", "10"], capsys)[1])
    assert max(est["residuals"]) <= est["tol"]


def test_spectrum_constant_dataset(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("7\n7\n7\n")
    est = json.loads(run(["spectrum", str(p), "--range", "1.5", "10", "--steps", "100"], capsys)[1])
    assert est["detected"] == [] and est["upper_bound"] is None


def test_spectrum_usage_errors(capsys):
    assert run(["spectrum", "--family", "uexp:10:0:1", "--range", "5", "2"], capsys)[0] == EXIT_USAGE
    assert run(["spectrum", "--family", "uexp:10:0:1", "--range", "0.5", "2"], capsys)[0] == EXIT_USAGE
    assert run(["spectrum", "--range", "2", "5"], capsys)[0] == EXIT_USAGE
    assert run(["spectrum", "--family", "lattice:0/1:1", "--range", "2", "5"], capsys)[0] == EXIT_USAGE


def test_verify(capsys, tmp_path):
    code, out, err = run(["verify", "--suite", "exp_tv_contrast"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)[0]["passed"]
    assert "PASS" in err
    code, out, _ = run(["verify", "--suite", "exp_rank_bound", "--m", "1000"], capsys)
    res = json.loads(out)[0]
    assert any("below the recommended" in n for n in res["notes"])
    assert code == (EXIT_OK if res["passed"] else EXIT_FAIL)
    assert run(["verify", "--suite", "bogus"], capsys)[0] == EXIT_USAGE


def test_verify_all(capsys):
    code, out, _ = run(["verify", "--suite", "all"], capsys)
    assert code == EXIT_OK
    assert len(json.loads(out)) == 12


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "benfordkit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "benfordkit" in proc.stdout
