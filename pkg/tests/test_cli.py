"""CLI tests: parsing, artifacts, exit codes, and the analyze pipeline."""

import math

import numpy as np
import pytest

from longcycle import DataError, GridSpec, ArgumentError
from longcycle.cli import infer_period, main, parse_grid_flag, read_series, write_series_csv
from longcycle.dgp import Series
from longcycle._rng import substream


# ---------------------------------------------------------------------------
# Series ingestion


def test_infer_period():
    assert infer_period(["1990Q1", "1990Q2"]) == 4
    assert infer_period(["1990-01", "1990-02"]) == 12
    assert infer_period(["1990M01", "1990M02"]) == 12
    assert infer_period(["1990-01-31", "1990-02-28"]) == 12
    assert infer_period(["1990-01-01", "1990-04-01"]) == 4
    assert infer_period(["1990-01-01", "1991-01-01"]) is None
    assert infer_period(["obs1", "obs2"]) is None
    assert infer_period([]) is None


def test_read_series_happy_path(tmp_path):
    p = tmp_path / "gdp.csv"
    p.write_text("# a comment\ndate,value\n1990Q1,1.5\n1990Q2,2.5\n1990Q3,-3\n")
    s = read_series(p)
    assert s.name == "gdp"
    assert s.period == 4
    assert np.array_equal(s.values, [1.5, 2.5, -3.0])
    # Explicit period beats inference.
    assert read_series(p, period=12).period == 12


def test_read_series_error_line_numbers(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("date,value\n1,1.0\n2,oops\n")
    with pytest.raises(DataError, match=r"bad\.csv:3"):
        read_series(p)
    p.write_text("time,value\n1,1.0\n")
    with pytest.raises(DataError, match="expected header"):
        read_series(p)
    p.write_text("date,value\n1,1.0\nrowwithoutcomma\n")
    with pytest.raises(DataError, match=r"bad\.csv:3"):
        read_series(p)
    p.write_text("")
    with pytest.raises(DataError, match="no data rows"):
        read_series(p)
    with pytest.raises(DataError):
        read_series(tmp_path / "absent.csv")


def test_read_series_log_transform(tmp_path):
    p = tmp_path / "lvl.csv"
    p.write_text("date,value\n1,1.0\n2,2.718281828459045\n")
    s = read_series(p, log=True)
    assert s.values[1] == pytest.approx(1.0)
    p.write_text("date,value\n1,1.0\n2,0.0\n")
    with pytest.raises(DataError, match="positive"):
        read_series(p, log=True)


def test_series_csv_round_trip(tmp_path):
    vals = substream(50).standard_normal(40) * 1e6
    p = tmp_path / "rt.csv"
    write_series_csv(Series(vals, name="rt", period=0), p, meta={"seed": 1})
    back = read_series(p)
    assert np.array_equal(back.values, vals)  # %.17g is lossless for doubles


# ---------------------------------------------------------------------------
# Grid flag


def test_parse_grid_flag():
    spec = parse_grid_flag("c:-30:10:linear,d:8:40:5:linear")
    assert spec == GridSpec(
        c_min=-30.0, c_points=10, d_min=8.0, d_max=40.0, d_points=5, spacing="linear"
    )
    # Order of the components does not matter.
    assert parse_grid_flag("d:8:40:5:log,c:-30:10:log").d_max == 40.0


def test_parse_grid_flag_errors():
    for bad in (
        "c:-30:10:linear",  # missing d
        "d:8:40:5:linear",  # missing c
        "x:-30:10:linear,d:8:40:5:linear",
        "c:-30:10:linear,d:8:40:5:log",  # spacings disagree
        "c:-30:ten:linear,d:8:40:5:linear",
        "c:-30:10,d:8:40:5:linear",  # short c spec
    ):
        with pytest.raises(ArgumentError):
            parse_grid_flag(bad)
    # Short-cycle guard lives in GridSpec, armed by the parser flag.
    with pytest.raises(ArgumentError):
        parse_grid_flag("c:-30:10:linear,d:2:40:5:linear").arrays(None)
    assert parse_grid_flag("c:-30:10:linear,d:2:40:5:linear", allow_short_cycles=True).arrays(None)


# ---------------------------------------------------------------------------
# Exit codes


def test_exit_codes(tmp_path, capsys):
    assert main(["--help"]) == 0
    assert main(["analyze", str(tmp_path / "nope.csv")]) == 3
    assert main(["bogus-command"]) == 2
    assert main(["simulate", "--n", "50"]) == 2  # drifting without --c/--d
    assert main(["--alpha", "1.5", "simulate", "--n", "50"]) == 2
    short = tmp_path / "short.csv"
    short.write_text("date,value\n" + "\n".join(f"{t},{t % 3}" for t in range(1, 31)) + "\n")
    assert main(["analyze", str(short)]) == 3  # fewer than 40 observations
    capsys.readouterr()


def test_exit_code_for_broken_table(tmp_path, capsys):
    data = tmp_path / "y.csv"
    write_series_csv(
        Series(substream(51).standard_normal(100), name="y", period=0), data
    )
    bad = tmp_path / "table.csv"
    bad.write_text("not a table\n")
    assert main(["analyze", str(data), "--table", str(bad)]) == 4
    err = capsys.readouterr().err
    assert "error:" in err


def test_exit_code_for_cache_miss(tmp_path, capsys):
    data = tmp_path / "y.csv"
    write_series_csv(
        Series(substream(52).standard_normal(100), name="y", period=0), data
    )
    empty = tmp_path / "emptycache"
    empty.mkdir()
    assert main(["--cache-dir", str(empty), "analyze", str(data)]) == 4
    assert "cv-table" in capsys.readouterr().err  # tells the user how to fix it


# ---------------------------------------------------------------------------
# simulate / irf / spectrum artifacts


def test_simulate_drifting_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["simulate", "--mode", "drifting", "--c", "-5", "--d", "20", "--n", "120"]
    assert main(["--seed", "3", *args, "--out", str(out1)]) == 0
    assert main(["--seed", "3", *args, "--out", str(out2)]) == 0
    s1, s2 = read_series(out1), read_series(out2)
    assert np.array_equal(s1.values, s2.values)
    assert s1.values.size == 120
    assert main(["--seed", "4", *args, "--out", str(out2)]) == 0
    assert not np.array_equal(s1.values, read_series(out2).values)
    capsys.readouterr()


def test_simulate_fixed_and_ar_innovations(tmp_path, capsys):
    out = tmp_path / "f.csv"
    code = main(
        ["simulate", "--mode", "fixed", "--phi1", "1.2", "--phi2", "-0.5", "--n", "80",
         "--det", "constant", "--mu", "7", "--innov", "ar", "--rho", "0.4",
         "--out", str(out)]
    )
    assert code == 0
    s = read_series(out)
    assert s.values.size == 80
    assert abs(float(np.mean(s.values)) - 7.0) < 2.0
    assert main(["simulate", "--mode", "fixed", "--phi1", "1.2", "--phi2", "-0.5",
                 "--n", "80", "--innov", "ar", "--out", str(out)]) == 2  # ar needs --rho
    capsys.readouterr()


def test_irf_artifact(tmp_path, capsys):
    out = tmp_path / "irf.csv"
    assert main(["irf", "--c", "-5", "--d", "20", "--n", "200", "--horizon", "10",
                 "--sigma", "2.0", "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert lines[0] == "j,weight"
    assert len(lines) == 1 + 11
    j0, w0 = lines[1].split(",")
    assert j0 == "0" and float(w0) == 2.0  # w_0 = 1 scaled by sigma
    capsys.readouterr()


def test_spectrum_artifact(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--c", "4", "--d", "10", "--n", "200",
                 "--h-min", "6", "--h-max", "12", "--points", "13",
                 "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert lines[0] == "freq,value,kind"
    rows = [ln.split(",") for ln in lines[1:]]
    kinds = {r[2] for r in rows}
    assert kinds == {"theoretical", "expected_limit"}
    assert len(rows) == 2 * 13
    assert all(float(r[1]) >= 0 for r in rows)
    # Adding an input series appends its scaled periodogram.
    data = tmp_path / "y.csv"
    write_series_csv(Series(substream(53).standard_normal(100), name="y", period=0), data)
    assert main(["spectrum", "--c", "4", "--d", "10", "--points", "13",
                 "--h-min", "6", "--h-max", "12",
                 "--input", str(data), "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert len(lines) == 1 + 3 * 13
    capsys.readouterr()


# ---------------------------------------------------------------------------
# size-table and cv-table


def test_size_table_artifact(tmp_path, capsys):
    code = main(
        ["--reps", "1000", "--seed", "2",
         "--grid", "c:-5:2:linear,d:6.5:15:3:linear",
         "size-table", "--det", "constant", "--out-dir", str(tmp_path)]
    )
    assert code == 0
    out = tmp_path / "size_constant.csv"
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    assert header[0] == "c\\d" and len(header) == 4
    tau_row = lines[1].split(",")
    assert tau_row[0] == "tau_theta"
    d_vals = [float(x) for x in header[1:]]
    for dv, tv in zip(d_vals, tau_row[1:]):
        assert float(tv) == pytest.approx(2 * math.pi / dv, abs=5e-5)
    body = [ln.split(",") for ln in lines[2:]]
    assert len(body) == 3  # c grid has 2+1 points
    for row in body:
        for cell in row[1:]:
            assert 0.0 <= float(cell) <= 1.0
    capsys.readouterr()


def test_cv_table_and_analyze_end_to_end(tmp_path, fixtures_dir, capsys):
    cache = tmp_path / "cache"
    grid = "c:-30:4:log,d:10:40:4:log"
    code = main(["--reps", "1000", "--seed", "11", "--cache-dir", str(cache),
                 "--grid", grid, "cv-table", "--det", "constant"])
    assert code == 0
    files = list(cache.glob("cv_constant_*.csv"))
    assert len(files) == 1
    out = capsys.readouterr()
    assert "wrote" in out.out and "cells" in out.err  # progress goes to stderr

    code = main(["--cache-dir", str(cache), "--grid", grid,
                 "analyze", str(fixtures_dir / "long_cycle.csv"),
                 "--out-dir", str(tmp_path)])
    assert code == 0
    report = capsys.readouterr().out
    assert "long_cycle" in report
    assert "accepted" in report
    for suffix in ("confidence_set", "intervals", "irf"):
        assert (tmp_path / f"long_cycle_{suffix}.csv").exists()


def test_analyze_with_explicit_table(tmp_path, fixtures_dir, default_table_path, capsys):
    code = main(["analyze", str(fixtures_dir / "long_cycle.csv"),
                 "--table", str(default_table_path), "--out-dir", str(tmp_path)])
    assert code == 0
    report = capsys.readouterr().out
    assert "tau_theta interval" in report

    iv_lines = (tmp_path / "long_cycle_intervals.csv").read_text().splitlines()
    data = [ln for ln in iv_lines if not ln.startswith("#")]
    theta = data[1].split(",")
    assert theta[0] == "tau_theta" and theta[5] == "false"
    lo_p, hi_p = float(theta[3]), float(theta[4])
    true_period = 2 * math.pi / 20.0 * 800  # generating cell of the fixture
    assert lo_p <= true_period <= hi_p

    cs_lines = (tmp_path / "long_cycle_confidence_set.csv").read_text().splitlines()
    data_rows = [ln for ln in cs_lines if not ln.startswith("#")][1:]
    assert len(data_rows) == 61 * 60
    accepted = [r for r in data_rows if r.endswith(",true")]
    assert accepted

    irf_rows = [ln for ln in (tmp_path / "long_cycle_irf.csv").read_text().splitlines()
                if not ln.startswith("#")][1:]
    # One block of horizon+1 weights per accepted grid point.
    assert len(irf_rows) == len(accepted) * 201
    first = irf_rows[0].split(",")
    assert first[2] == "0"


def test_analyze_white_noise_reports_empty_set(tmp_path, fixtures_dir, default_table_path, capsys):
    code = main(["analyze", str(fixtures_dir / "white_noise.csv"),
                 "--table", str(default_table_path), "--out-dir", str(tmp_path)])
    assert code == 0
    report = capsys.readouterr().out
    assert "0 of 3660 grid points accepted" in report
    assert "empty" in report
    iv = (tmp_path / "white_noise_intervals.csv").read_text().splitlines()
    rows = [ln for ln in iv if not ln.startswith("#")]
    assert rows[1].split(",")[5] == "true"  # tau_theta empty flag


def test_analyze_det_and_p_overrides(tmp_path, fixtures_dir, default_table_path, capsys):
    code = main(["analyze", str(fixtures_dir / "long_cycle.csv"),
                 "--det", "constant", "--p", "1",
                 "--table", str(default_table_path), "--out-dir", str(tmp_path)])
    assert code == 0
    report = capsys.readouterr().out
    assert "error lags p      : 1  (user-set)" in report
    assert "deterministic     : constant  (user-set)" in report
