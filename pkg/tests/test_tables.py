"""Quantile table tests: building, persistence, lookup, caching, resume."""

import numpy as np
import pytest
from scipy.stats import chi2

from longcycle import (
    ArgumentError,
    Localization,
    QuantileTable,
    TableChecksumError,
    TableFormatError,
    TableRangeError,
    TableVersionError,
    build_table,
    default_c_grid,
    default_d_grid,
    load_table,
    lookup,
    save_table,
    size_surface,
)
from longcycle.diffusion import wald_draw_batch
from longcycle.tables import (
    build_table_resumable,
    cache_file_name,
    grid_digest,
    quantile_from_draws,
    resolve_cache_dir,
    table_det_kind,
)

C3 = np.array([-10.0, -4.0, 0.0])
D3 = np.array([5.0, 9.0, 14.0])


def test_default_grids():
    c = default_c_grid()
    d = default_d_grid()
    assert c.size == 61 and d.size == 60
    assert c[-1] == 0.0 and c[0] == -678.0
    assert np.all(np.diff(c) > 0) and np.all(np.diff(d) > 0)
    assert d[-1] == pytest.approx(678.0)
    assert d[0] > 2 * np.pi  # open at the short-cycle boundary


def test_table_det_kind_normalization():
    assert table_det_kind("seasonal:12") == "constant"
    assert table_det_kind("cycles") == "cycles:1"
    assert table_det_kind("trend") == "trend"


def test_quantile_is_exact_order_statistic():
    draws = np.arange(1.0, 101.0)
    np.random.default_rng(0).shuffle(draws)
    # ceil(0.95 * 100) = 95th smallest = 95.0
    assert quantile_from_draws(draws, 0.05) == 95.0
    assert quantile_from_draws(draws, 0.10) == 90.0
    assert quantile_from_draws(np.array([7.0]), 0.05) == 7.0
    with pytest.raises(ArgumentError):
        quantile_from_draws(draws, 0.0)
    with pytest.raises(ArgumentError):
        quantile_from_draws(draws, 1.0)


def test_build_table_validations():
    with pytest.raises(ArgumentError):
        build_table("constant", 0.05, C3, D3, R=500)
    with pytest.raises(ArgumentError):
        build_table("constant", 0.05, np.array([0.0, -1.0]), D3, R=1000)
    with pytest.raises(ArgumentError):
        build_table("constant", 0.05, np.array([-1.0, 0.5]), D3, R=1000)
    with pytest.raises(ArgumentError):
        build_table("constant", 0.05, C3, np.array([-2.0, 5.0]), R=1000)


def test_build_table_deterministic_across_threads():
    a = build_table("constant", 0.05, C3, D3, R=1000, seed=5, threads=1)
    b = build_table("constant", 0.05, C3, D3, R=1000, seed=5, threads=3)
    assert np.array_equal(a.q, b.q)
    assert a.covers(-4.0, 9.0)
    assert not a.covers(-11.0, 9.0)
    assert not a.covers(-4.0, 4.0)


def test_table_matches_direct_draw_quantiles():
    tab = build_table("trend", 0.10, C3[:2], D3[:2], R=2000, seed=9)
    for ci, cval in enumerate(C3[:2]):
        for dj, dval in enumerate(D3[:2]):
            draws, _ = wald_draw_batch(
                Localization(cval, dval), ("trend",), 2000, 0.01, seed=9, cell_key=(ci, dj)
            )
            assert tab.q[ci, dj] == quantile_from_draws(draws["trend"], 0.10)


def test_size_surface_consistent_with_shared_draws():
    alpha = 0.05
    crit = float(chi2.ppf(1 - alpha, 2))
    size = size_surface("constant", C3[:2], D3[:2], alpha=alpha, R=1000, seed=5)
    tab = build_table("constant", alpha, C3[:2], D3[:2], R=1000, seed=5)
    # Same keyed draws: the table quantile exceeds the chi-squared critical
    # value exactly when more than alpha of the draws do.
    for ci in range(2):
        for dj in range(2):
            draws, _ = wald_draw_batch(
                Localization(C3[ci], D3[dj]), ("constant",), 1000, 0.01, seed=5, cell_key=(ci, dj)
            )
            assert size[ci, dj] == float(np.mean(draws["constant"] > crit))
            if tab.q[ci, dj] > crit:
                assert size[ci, dj] >= alpha


def test_lookup_nodes_interpolation_and_range():
    q = np.add.outer(2.0 * C3, 3.0 * D3) + 1.0  # affine in (c, d)
    tab = QuantileTable("constant", 0.05, C3, D3, q, R=1000, dt=0.01, seed=0)
    for ci, cval in enumerate(C3):
        for dj, dval in enumerate(D3):
            assert lookup(tab, Localization(cval, dval)) == pytest.approx(q[ci, dj], rel=1e-14)
    # Bilinear interpolation is exact for affine surfaces.
    assert lookup(tab, Localization(-7.3, 11.25)) == pytest.approx(2 * -7.3 + 3 * 11.25 + 1, rel=1e-12)
    with pytest.raises(TableRangeError):
        lookup(tab, Localization(-10.5, 9.0))
    with pytest.raises(TableRangeError):
        lookup(tab, Localization(-4.0, 14.5))


def test_lookup_degenerate_grids():
    tab = QuantileTable("constant", 0.05, np.array([-2.0]), D3, np.array([[1.0, 3.0, 5.0]]), 1000, 0.01, 0)
    assert lookup(tab, Localization(-2.0, 7.0)) == pytest.approx(2.0)
    tab = QuantileTable("constant", 0.05, C3, np.array([5.0]), np.array([[2.0], [4.0], [8.0]]), 1000, 0.01, 0)
    assert lookup(tab, Localization(-7.0, 5.0)) == pytest.approx(3.0)


def test_save_load_round_trip(tmp_path):
    tab = build_table("constant", 0.05, C3[:2], D3[:2], R=1000, seed=3)
    p = tmp_path / "tab.csv"
    save_table(tab, p)
    back = load_table(p)
    assert back.det_kind == tab.det_kind
    assert back.alpha == tab.alpha
    assert back.R == tab.R and back.dt == tab.dt and back.seed == tab.seed
    assert np.array_equal(back.c_grid, tab.c_grid)
    assert np.array_equal(back.d_grid, tab.d_grid)
    assert np.array_equal(back.q, tab.q)


def test_load_rejects_corruption(tmp_path):
    tab = build_table("constant", 0.05, C3[:2], D3[:2], R=1000, seed=3)
    p = tmp_path / "tab.csv"
    save_table(tab, p)
    text = p.read_text()

    flipped = text.replace("quantile", "quantile").splitlines()
    # Tamper with one data digit.
    flipped[-1] = flipped[-1][:-1] + ("1" if not flipped[-1].endswith("1") else "2")
    (tmp_path / "bad.csv").write_text("\n".join(flipped) + "\n")
    with pytest.raises(TableChecksumError):
        load_table(tmp_path / "bad.csv")

    # Truncation drops rows: checksum no longer matches.
    (tmp_path / "trunc.csv").write_text("\n".join(text.splitlines()[:-1]) + "\n")
    with pytest.raises(TableChecksumError):
        load_table(tmp_path / "trunc.csv")

    (tmp_path / "schema.csv").write_text(text.replace("# schema=1", "# schema=99"))
    with pytest.raises(TableVersionError):
        load_table(tmp_path / "schema.csv")

    (tmp_path / "empty.csv").write_text("")
    with pytest.raises(TableFormatError):
        load_table(tmp_path / "empty.csv")
    with pytest.raises(TableFormatError):
        load_table(tmp_path / "missing.csv")


def test_cache_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("LONGCYCLE_CACHE_DIR", raising=False)
    assert resolve_cache_dir("/x/y") == resolve_cache_dir("/x/y")
    assert str(resolve_cache_dir("/x/y")) == "/x/y"
    monkeypatch.setenv("LONGCYCLE_CACHE_DIR", str(tmp_path))
    assert resolve_cache_dir(None) == tmp_path
    monkeypatch.delenv("LONGCYCLE_CACHE_DIR")
    assert resolve_cache_dir(None).name == "longcycle"


def test_cache_file_name_keys_all_settings():
    base = cache_file_name("constant", 0.05, 1000, 0.01, 7, C3, D3)
    assert base.startswith("cv_constant_a0.05_R1000_dt0.01_s7_g") and base.endswith(".csv")
    assert cache_file_name("seasonal:4", 0.05, 1000, 0.01, 7, C3, D3) == base
    others = [
        cache_file_name("trend", 0.05, 1000, 0.01, 7, C3, D3),
        cache_file_name("constant", 0.10, 1000, 0.01, 7, C3, D3),
        cache_file_name("constant", 0.05, 2000, 0.01, 7, C3, D3),
        cache_file_name("constant", 0.05, 1000, 0.002, 7, C3, D3),
        cache_file_name("constant", 0.05, 1000, 0.01, 8, C3, D3),
        cache_file_name("constant", 0.05, 1000, 0.01, 7, C3[:2], D3),
    ]
    assert len({base, *others}) == 7
    assert grid_digest(C3, D3) != grid_digest(C3[:2], D3)
    assert cache_file_name("cycles:1,2", 0.05, 1000, 0.01, 7, C3, D3).startswith("cv_cycles_1-2_")


def test_resumable_build_resumes_identically(tmp_path):
    final = tmp_path / "cv.csv"
    ref = build_table("constant", 0.05, C3, D3, R=1000, seed=5)

    out = build_table_resumable("constant", 0.05, C3, D3, 1000, 0.01, 5, final, stop_after_cells=4)
    assert out is None
    partial = tmp_path / "cv.csv.partial"
    assert partial.exists() and not final.exists()
    n_done = len(partial.read_text().splitlines()) - 1
    assert n_done == 4

    out = build_table_resumable("constant", 0.05, C3, D3, 1000, 0.01, 5, final)
    assert out is not None
    assert np.array_equal(out.q, ref.q)
    assert final.exists() and not partial.exists()
    assert np.array_equal(load_table(final).q, ref.q)


def test_resumable_rejects_mismatched_settings(tmp_path):
    final = tmp_path / "cv.csv"
    build_table_resumable("constant", 0.05, C3, D3, 1000, 0.01, 5, final, stop_after_cells=2)
    with pytest.raises(TableFormatError):
        build_table_resumable("constant", 0.05, C3, D3, 1000, 0.01, 6, final)
    with pytest.raises(TableFormatError):
        build_table_resumable("trend", 0.05, C3, D3, 1000, 0.01, 5, final)
