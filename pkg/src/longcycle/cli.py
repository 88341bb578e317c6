"""Command-line front end.

Subcommands:

    analyze     CSV in, cycle-length report + confidence-set artifacts out
    size-table  rejection rates of the chi-squared critical value on a grid
    cv-table    build and cache a critical-value table (resumable)
    simulate    draw a long-cycle or fixed-coefficient AR(2) sample path
    irf         impulse-response weights for a localization pair
    spectrum    theoretical spectrum vs. the scaled-periodogram limit

Global flags live on the group (before the subcommand):

    longcycle --seed 7 --alpha 0.05 analyze data.csv

Exit codes: 0 success, 2 usage, 3 data error, 4 cache or table error,
5 numerical failure. Every output file records the flags that produced it
in `# key=value` header lines, so any artifact can be regenerated.
"""

from __future__ import annotations

import math
import os
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from .core_model import ARCoefficients, Localization, irf_weights
from .dgp import DetSpec, InnovationSpec, Series, simulate_fixed_ar2, simulate_long_cycle
from .errors import (
    ArgumentError,
    CacheMissError,
    DataError,
    NumericalError,
    SingularityError,
    TableError,
)
from .estimation import bic_select, fit_ar2, parse_det_kind
from .inference import (
    GridSpec,
    confidence_set,
    point_estimate,
    project_tau_omega,
    project_tau_theta,
    write_confidence_set_csv,
    write_intervals_csv,
)
from .spectral import (
    SpectrumCurve,
    expected_periodogram_limit,
    periodogram,
    theoretical_spectrum,
    write_spectrum_csv,
)
from .tables import (
    build_table_resumable,
    cache_file_name,
    default_c_grid,
    default_d_grid,
    load_table,
    resolve_cache_dir,
    size_surface,
    table_det_kind,
)

try:
    from importlib.metadata import version as _pkg_version

    _VERSION = _pkg_version("longcycle")
except Exception:  # pragma: no cover - metadata missing in odd installs
    _VERSION = "unknown"

# Grid used by size-table when --grid is not given. d deliberately dips
# below 2*pi: the size experiment has no sample length, and the shallow
# cells are where the chi-squared approximation fails hardest.
_SIZE_C = np.array([-200.0, -100.0, -50.0, -25.0, -10.0, -5.0, -2.0, -1.0, 0.0])
_SIZE_D = np.array([5.0, 10.0, 15.0, 20.0, 30.0, 50.0, 100.0, 200.0])

_SIZE_KINDS = ("constant", "cycles:1", "trend")


# ---------------------------------------------------------------------------
# CSV ingestion


def infer_period(dates: list[str]) -> int | None:
    """Guess the seasonal period from date labels; None when unclear.

    Recognizes quarter labels (1990Q1), month labels (1990-01 or 1990M01),
    and ISO dates whose spacing is roughly monthly or quarterly.
    """
    if not dates:
        return None
    head = dates[0].strip()
    if re.fullmatch(r"\d{4}Q[1-4]", head):
        return 4
    if re.fullmatch(r"\d{4}[-M]\d{2}", head):
        return 12
    if len(dates) >= 2 and re.fullmatch(r"\d{4}-\d{2}-\d{2}", head):
        import datetime

        try:
            d0 = datetime.date.fromisoformat(dates[0].strip())
            d1 = datetime.date.fromisoformat(dates[1].strip())
        except ValueError:
            return None
        gap = abs((d1 - d0).days)
        if 28 <= gap <= 31:
            return 12
        if 85 <= gap <= 95:
            return 4
    return None


def read_series(path, log: bool = False, period: int | None = None) -> Series:
    """Parse a two-column `date,value` CSV into a Series.

    Dates are kept only to label the series and to infer a seasonal
    period; all failures report the offending line number.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise DataError(f"{path}: no data rows")
    header_no, header = rows[0]
    cols = [c.strip().lower() for c in header.split(",")]
    if cols[:2] != ["date", "value"]:
        raise DataError(f"{path}:{header_no}: expected header 'date,value', got {header!r}")
    dates: list[str] = []
    values: list[float] = []
    for lineno, ln in rows[1:]:
        parts = ln.split(",")
        if len(parts) < 2:
            raise DataError(f"{path}:{lineno}: expected 'date,value', got {ln!r}")
        dates.append(parts[0])
        try:
            values.append(float(parts[1]))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: cannot parse value {parts[1]!r}") from exc
    y = np.asarray(values)
    if log:
        if np.any(y <= 0):
            bad = int(np.argmax(y <= 0))
            raise DataError(f"{path}: --log requires positive values; row {bad + 1} has {y[bad]:g}")
        y = np.log(y)
    return Series(y, name=path.stem, period=period if period is not None else infer_period(dates))


def write_series_csv(series: Series, path, meta: dict | None = None) -> None:
    """Emit `date,value` rows (dates are 1..n); parses back to the same values."""
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append("date,value")
    for t, v in enumerate(series.values, start=1):
        lines.append(f"{t},{v:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Flag parsing helpers


def parse_grid_flag(text: str, allow_short_cycles: bool = False) -> GridSpec:
    """Parse `c:<min>:<pts>:<spacing>,d:<min>:<max>:<pts>:<spacing>`."""
    spec: dict[str, list[str]] = {}
    for part in text.split(","):
        fields = part.split(":")
        if not fields or fields[0] not in ("c", "d"):
            raise ArgumentError(f"bad grid component {part!r}; expected c:... or d:...")
        spec[fields[0]] = fields[1:]
    if set(spec) != {"c", "d"}:
        raise ArgumentError(f"grid spec must define both c and d, got {text!r}")
    try:
        c_min, c_pts, c_spacing = float(spec["c"][0]), int(spec["c"][1]), spec["c"][2]
        d_min, d_max, d_pts, d_spacing = (
            float(spec["d"][0]),
            float(spec["d"][1]),
            int(spec["d"][2]),
            spec["d"][3],
        )
    except (IndexError, ValueError) as exc:
        raise ArgumentError(
            f"bad grid spec {text!r}; expected c:<min>:<pts>:<spacing>,d:<min>:<max>:<pts>:<spacing>"
        ) from exc
    if c_spacing != d_spacing:
        raise ArgumentError(f"c and d spacings must agree, got {c_spacing!r} and {d_spacing!r}")
    return GridSpec(
        c_min=c_min,
        c_points=c_pts,
        d_min=d_min,
        d_max=d_max,
        d_points=d_pts,
        spacing=c_spacing,
        allow_short_cycles=allow_short_cycles,
    )


def _grid_desc(c: np.ndarray, d: np.ndarray) -> str:
    return (
        f"c in [{c[0]:g}, {c[-1]:g}] x {c.size}, d in [{d[0]:.6g}, {d[-1]:g}] x {d.size}"
    )


def _find_cached_table(cache_dir: Path, det_kind: str, alpha: float, c, d):
    """Scan the cache for a loadable table matching kind+alpha and covering the grid."""
    want = table_det_kind(det_kind)
    candidates = sorted(cache_dir.glob("cv_*.csv")) if cache_dir.is_dir() else []
    for f in candidates:
        try:
            table = load_table(f)
        except TableError:
            continue
        if table.det_kind != want or abs(table.alpha - alpha) > 1e-12:
            continue
        if table.covers(c[0], d[0]) and table.covers(c[-1], d[-1]):
            return table, f
    raise CacheMissError(
        f"no cached critical-value table for det_kind={want!r}, alpha={alpha:g} covering "
        f"{_grid_desc(np.asarray(c), np.asarray(d))} in {cache_dir}; "
        f"run `longcycle --alpha {alpha:g} cv-table --det {want}` first or pass --table"
    )


# ---------------------------------------------------------------------------
# Report


@dataclass
class AnalysisReport:
    name: str
    n: int
    period: int | None
    det_kind: str
    det_selected: bool
    p: int
    p_selected: bool
    point_theta: float | None
    point_omega: float | None
    n_accepted: int
    n_points: int
    n_failed: int
    theta_interval: object
    omega_interval: object
    grid_desc: str
    table_desc: str
    runtime_s: float

    def to_text(self) -> str:
        def iv_text(iv) -> str:
            if iv.empty:
                return "empty (no accepted grid point supports this measure)"
            lo_p, hi_p = iv.periods(self.n)
            lo = "inf" if lo_p is None else f"{lo_p:.1f}"
            if iv.unbounded:
                return f"[{lo}, inf) periods"
            return f"[{lo}, {hi_p:.1f}] periods"

        def pt(x) -> str:
            if x is None:
                return "---"
            if math.isinf(x):
                return "inf"
            return f"{x:.1f}"

        sel = "BIC-selected"
        fixed = "user-set"
        lines = [
            f"series            : {self.name}  (n = {self.n}"
            + (f", period = {self.period})" if self.period else ")"),
            f"deterministic     : {self.det_kind}  ({sel if self.det_selected else fixed})",
            f"error lags p      : {self.p}  ({sel if self.p_selected else fixed})",
            f"point estimate    : n*tau_theta = {pt(self.point_theta)},"
            f" n*tau_omega = {pt(self.point_omega)} periods",
            f"confidence set    : {self.n_accepted} of {self.n_points} grid points accepted"
            + (f" ({self.n_failed} failed)" if self.n_failed else ""),
            f"tau_theta interval: {iv_text(self.theta_interval)}",
            f"tau_omega interval: {iv_text(self.omega_interval)}",
            f"grid              : {self.grid_desc}",
            f"table             : {self.table_desc}",
            f"runtime           : {self.runtime_s:.1f} s",
        ]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Command group


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Base RNG seed.")
@click.option("--threads", type=int, default=None, help="Worker threads (default: all cores).")
@click.option("--cache-dir", type=click.Path(), default=None, help="Critical-value table cache (or LONGCYCLE_CACHE_DIR).")
@click.option("--alpha", type=float, default=0.05, show_default=True, help="Test level.")
@click.option("--grid", "grid_flag", type=str, default=None, help="Grid spec c:<min>:<pts>:<spacing>,d:<min>:<max>:<pts>:<spacing>.")
@click.option("--dt", type=float, default=0.01, show_default=True, help="Euler step for limit simulations.")
@click.option("--reps", type=int, default=None, help="Monte Carlo replications (table/size builds).")
@click.option("--fast", is_flag=True, help="Fast profile: reps=20000 unless --reps is given.")
@click.pass_context
def cli(ctx, seed, threads, cache_dir, alpha, grid_flag, dt, reps, fast):
    """Inference on long stochastic cycles in time series."""
    if not (0.0 < alpha < 1.0):
        raise click.UsageError(f"--alpha must be in (0, 1), got {alpha}")
    if reps is None:
        reps = 20_000 if fast else 100_000
    ctx.obj = {
        "seed": seed,
        "threads": threads if threads is not None else (os.cpu_count() or 1),
        "cache_dir": resolve_cache_dir(cache_dir),
        "alpha": alpha,
        "grid_flag": grid_flag,
        "dt": dt,
        "reps": reps,
        "fast": fast,
    }


def _meta(ctx_obj: dict, command: str, **extra) -> dict:
    meta = {
        "command": command,
        "version": _VERSION,
        "seed": ctx_obj["seed"],
        "alpha": ctx_obj["alpha"],
        "dt": ctx_obj["dt"],
    }
    if ctx_obj["grid_flag"]:
        meta["grid"] = ctx_obj["grid_flag"]
    meta.update(extra)
    return meta


@cli.command()
@click.argument("csv_path", type=click.Path(exists=False))
@click.option("--log", "log_transform", is_flag=True, help="Analyze the natural log of the series.")
@click.option("--det", default="auto", show_default=True, help="Deterministic kind token, or 'auto' for BIC selection.")
@click.option("--p", "p_flag", default="auto", show_default=True, help="Error autocorrelation lags, or 'auto'.")
@click.option("--period", type=int, default=None, help="Seasonal period (overrides inference from dates).")
@click.option("--table", "table_path", type=click.Path(), default=None, help="Explicit critical-value table file.")
@click.option("--out-dir", type=click.Path(), default=".", show_default=True, help="Artifact directory.")
@click.option("--horizon", type=int, default=200, show_default=True, help="IRF horizon for accepted points.")
@click.pass_obj
def analyze(obj, csv_path, log_transform, det, p_flag, period, table_path, out_dir, horizon):
    """Full pipeline: ingest, select, invert the test, report intervals."""
    t0 = time.monotonic()
    series = read_series(csv_path, log=log_transform, period=period)
    n = len(series)
    if n < 40:
        raise DataError(f"{csv_path}: need at least 40 observations, got {n}")

    det_selected = det == "auto"
    p_selected = p_flag == "auto"
    if det_selected:
        det_kind, p_hat = bic_select(series)
    else:
        parse_det_kind(det)  # validate token early
        det_kind, p_hat = bic_select(series, det_kind_candidates=(det,))
    p = p_hat if p_selected else int(p_flag)
    if p < 0:
        raise click.UsageError(f"--p must be >= 0, got {p}")

    grid = parse_grid_flag(obj["grid_flag"]) if obj["grid_flag"] else GridSpec()
    c_grid, d_grid = grid.arrays(n)
    if table_path is not None:
        table = load_table(table_path)
        table_file = Path(table_path)
    else:
        table, table_file = _find_cached_table(obj["cache_dir"], det_kind, obj["alpha"], c_grid, d_grid)

    cs = confidence_set(series, det_kind, p, (c_grid, d_grid), obj["alpha"], table)
    theta_iv = project_tau_theta(cs)
    omega_iv = project_tau_omega(cs)
    point = point_estimate(series, det_kind)
    point_theta = point_omega = None
    if point is not None:
        _, measures = point
        point_theta = measures.tau_theta * n
        point_omega = None if measures.tau_omega is None else measures.tau_omega * n

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(
        obj,
        "analyze",
        input=str(csv_path),
        n=n,
        det_kind=det_kind,
        p=p,
        log=log_transform,
        table=str(table_file),
    )
    write_confidence_set_csv(cs, out / f"{series.name}_confidence_set.csv", meta)
    write_intervals_csv(theta_iv, omega_iv, n, out / f"{series.name}_intervals.csv", meta)

    sigma_u = math.sqrt(fit_ar2(series, det_kind).sigma2_u_hat)
    irf_lines = [f"# {k}={v}" for k, v in {**meta, "sigma_u": f"{sigma_u:.17g}"}.items()]
    irf_lines.append("c,d,j,weight")
    for i in range(c_grid.size):
        for j in range(d_grid.size):
            if not cs.accepted[i, j]:
                continue
            w = irf_weights(Localization(float(c_grid[i]), float(d_grid[j])), n, horizon)
            for k, wk in enumerate(w):
                irf_lines.append(f"{c_grid[i]:.17g},{d_grid[j]:.17g},{k},{sigma_u * wk:.17g}")
    (out / f"{series.name}_irf.csv").write_text("\n".join(irf_lines) + "\n")

    report = AnalysisReport(
        name=series.name,
        n=n,
        period=series.period,
        det_kind=det_kind,
        det_selected=det_selected,
        p=p,
        p_selected=p_selected,
        point_theta=point_theta,
        point_omega=point_omega,
        n_accepted=cs.n_accepted,
        n_points=cs.n_points,
        n_failed=cs.n_failed,
        theta_interval=theta_iv,
        omega_interval=omega_iv,
        grid_desc=_grid_desc(c_grid, d_grid),
        table_desc=f"{table_file.name} (R={table.R}, dt={table.dt:g}, seed={table.seed})",
        runtime_s=time.monotonic() - t0,
    )
    click.echo(report.to_text())
    return report


@cli.command("size-table")
@click.option("--det", "det_kinds", multiple=True, help="Deterministic kinds (repeatable). Default: constant, cycles:1, trend.")
@click.option("--out-dir", type=click.Path(), default=".", show_default=True, help="Output directory.")
@click.pass_obj
def size_table(obj, det_kinds, out_dir):
    """Rejection rate of the chi-squared(2) critical value over a (c,d) grid."""
    kinds = det_kinds or _SIZE_KINDS
    if obj["grid_flag"]:
        c, d = parse_grid_flag(obj["grid_flag"], allow_short_cycles=True).arrays(None)
    else:
        c, d = _SIZE_C, _SIZE_D
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for kind in kinds:
        mat = size_surface(
            kind, c, d, alpha=obj["alpha"], R=obj["reps"], dt=obj["dt"], seed=obj["seed"],
            threads=obj["threads"],
        )
        meta = _meta(obj, "size-table", det_kind=kind, reps=obj["reps"])
        lines = [f"# {k}={v}" for k, v in meta.items()]
        lines.append("c\\d," + ",".join(f"{x:g}" for x in d))
        lines.append("tau_theta," + ",".join(f"{2.0 * math.pi / x:.4f}" for x in d))
        for i in range(c.size):
            lines.append(f"{c[i]:g}," + ",".join(f"{mat[i, j]:.17g}" for j in range(d.size)))
        name = out / f"size_{table_det_kind(kind).replace(':', '_').replace(',', '-')}.csv"
        name.write_text("\n".join(lines) + "\n")
        click.echo(f"wrote {name}")


@cli.command("cv-table")
@click.option("--det", default="constant", show_default=True, help="Deterministic kind the table is for.")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Output file (default: cache dir, derived name).")
@click.pass_obj
def cv_table(obj, det, out_path):
    """Build (or resume building) a critical-value table and persist it."""
    if obj["grid_flag"]:
        c, d = parse_grid_flag(obj["grid_flag"], allow_short_cycles=True).arrays(None)
    else:
        c, d = default_c_grid(), default_d_grid()
    R, dt, seed, alpha = obj["reps"], obj["dt"], obj["seed"], obj["alpha"]
    if out_path is None:
        obj["cache_dir"].mkdir(parents=True, exist_ok=True)
        out_path = obj["cache_dir"] / cache_file_name(det, alpha, R, dt, seed, c, d)
    out_path = Path(out_path)
    total = c.size * d.size
    step = max(1, total // 100)

    def progress(done, total_cells):
        if done % step == 0 or done == total_cells:
            click.echo(f"  {done}/{total_cells} cells", err=True)

    table = build_table_resumable(
        det, alpha, c, d, R, dt, seed, out_path, threads=obj["threads"], progress=progress
    )
    click.echo(f"wrote {out_path} ({table.c_grid.size}x{table.d_grid.size} cells, R={table.R})")


@cli.command()
@click.option("--mode", type=click.Choice(["drifting", "fixed"]), default="drifting", show_default=True)
@click.option("--c", "c_val", type=float, default=None, help="Localization c (drifting mode).")
@click.option("--d", "d_val", type=float, default=None, help="Localization d (drifting mode).")
@click.option("--phi1", type=float, default=None, help="AR(1) coefficient (fixed mode).")
@click.option("--phi2", type=float, default=None, help="AR(2) coefficient (fixed mode).")
@click.option("--n", "n_obs", type=int, required=True, help="Sample size.")
@click.option("--det", default="none", show_default=True, help="Deterministic kind token.")
@click.option("--mu", type=float, default=0.0, show_default=True, help="Deterministic level.")
@click.option("--slope", type=float, default=0.0, show_default=True, help="Trend slope (xi in xi*t/n).")
@click.option("--amplitude", type=float, default=0.0, show_default=True, help="Cycle/seasonal amplitude.")
@click.option("--innov", type=click.Choice(["iid", "ar"]), default="iid", show_default=True)
@click.option("--rho", default="", help="AR innovation coefficients, comma separated.")
@click.option("--sigma", type=float, default=1.0, show_default=True, help="Innovation scale.")
@click.option("--out", "out_path", type=click.Path(), default="simulated.csv", show_default=True)
@click.pass_obj
def simulate(obj, mode, c_val, d_val, phi1, phi2, n_obs, det, mu, slope, amplitude, innov, rho, sigma, out_path):
    """Draw one sample path and write it as a `date,value` CSV."""
    det_spec = _det_spec_from_flags(det, mu, slope, amplitude)
    if innov == "ar":
        coeffs = tuple(float(x) for x in rho.split(",") if x.strip())
        if not coeffs:
            raise click.UsageError("--innov ar requires --rho")
        innov_spec = InnovationSpec.ar(coeffs, sigma_eps=sigma)
    else:
        innov_spec = InnovationSpec.iid_normal(sigma)
    if mode == "drifting":
        if c_val is None or d_val is None:
            raise click.UsageError("drifting mode requires --c and --d")
        series = simulate_long_cycle(Localization(c_val, d_val), n_obs, det_spec, innov_spec, obj["seed"])
        model = f"drifting c={c_val:g} d={d_val:g}"
    else:
        if phi1 is None or phi2 is None:
            raise click.UsageError("fixed mode requires --phi1 and --phi2")
        series = simulate_fixed_ar2(ARCoefficients(phi1, phi2), n_obs, det_spec, innov_spec, obj["seed"])
        model = f"fixed phi1={phi1:g} phi2={phi2:g}"
    meta = _meta(obj, "simulate", model=model, n=n_obs, det=det_spec.token, innov=innov, sigma=sigma)
    write_series_csv(series, out_path, meta)
    click.echo(f"wrote {out_path}")


def _det_spec_from_flags(token: str, mu: float, slope: float, amplitude: float) -> DetSpec:
    kind, ks, period = parse_det_kind(token)
    if kind == "none":
        return DetSpec("none")
    if kind == "constant":
        return DetSpec("constant", mu=mu)
    if kind == "trend":
        return DetSpec("trend", mu=mu, xi=slope)
    if kind == "cycles":
        return DetSpec("cycles", mu=mu, ks=ks, theta_cos=(amplitude,) * len(ks))
    # seasonal: put the amplitude on the first season so the component is
    # nonconstant without extra per-season flags.
    gamma = (amplitude,) + (0.0,) * (period - 1)
    return DetSpec("seasonal", mu=mu, period=period, gamma=gamma)


@cli.command()
@click.option("--c", "c_val", type=float, required=True)
@click.option("--d", "d_val", type=float, required=True)
@click.option("--n", "n_obs", type=int, required=True, help="Sample size the weights are indexed by.")
@click.option("--horizon", type=int, default=200, show_default=True)
@click.option("--sigma", type=float, default=1.0, show_default=True, help="Shock standard deviation.")
@click.option("--out", "out_path", type=click.Path(), default="irf.csv", show_default=True)
@click.pass_obj
def irf(obj, c_val, d_val, n_obs, horizon, sigma, out_path):
    """Impulse-response weights to a one-standard-deviation shock."""
    w = irf_weights(Localization(c_val, d_val), n_obs, horizon)
    meta = _meta(obj, "irf", c=c_val, d=d_val, n=n_obs, horizon=horizon, sigma=sigma)
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append("j,weight")
    for k, wk in enumerate(w):
        lines.append(f"{k},{sigma * wk:.17g}")
    Path(out_path).write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {out_path}")


@cli.command()
@click.option("--c", "c_val", type=float, required=True, help="|c| is what matters; sign is ignored.")
@click.option("--d", "d_val", type=float, required=True)
@click.option("--n", "n_obs", type=int, default=200, show_default=True, help="Sample size for the exact spectrum.")
@click.option("--sigma2", type=float, default=1.0, show_default=True, help="Innovation variance.")
@click.option("--h-min", type=float, default=0.5, show_default=True)
@click.option("--h-max", type=float, default=30.0, show_default=True)
@click.option("--points", type=int, default=500, show_default=True)
@click.option("--input", "input_path", type=click.Path(), default=None, help="Optional series CSV; adds its scaled periodogram.")
@click.option("--out", "out_path", type=click.Path(), default="spectrum.csv", show_default=True)
@click.pass_obj
def spectrum(obj, c_val, d_val, n_obs, sigma2, h_min, h_max, points, input_path, out_path):
    """Exact spectrum and scaled-periodogram limit on a scaled frequency grid.

    All curves use scaled frequency h = n*omega and the n^-4 scaling that
    makes them comparable, so the bias of periodogram-based cycle lengths
    is visible as the horizontal offset between the two peaks.
    """
    loc = Localization(-abs(c_val), d_val)
    h = np.linspace(h_min, h_max, points)
    curves = []
    theo = theoretical_spectrum(loc, n_obs, sigma2, h / n_obs)
    curves.append(SpectrumCurve(h, theo.values / n_obs**4, "theoretical"))
    curves.append(expected_periodogram_limit(loc, sigma2, h))
    n_used = n_obs
    if input_path is not None:
        series = read_series(input_path)
        n_used = len(series)
        pg = periodogram(series, h / n_used)
        curves.append(SpectrumCurve(h, pg.values / n_used**4, "periodogram"))
    meta = _meta(
        obj, "spectrum", c=loc.c, d=loc.d, n=n_used, sigma2=sigma2,
        scaling="n^-4, freq column is h = n*omega",
    )
    write_spectrum_csv(curves, out_path, meta)
    click.echo(f"wrote {out_path}")


# ---------------------------------------------------------------------------
# Entry points


def main(argv=None) -> int:
    """Run the CLI and map domain errors to documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False, prog_name="longcycle")
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return int(exc.exit_code)
    except ArgumentError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except TableError as exc:
        click.echo(f"error: {exc}", err=True)
        return 4
    except (NumericalError, SingularityError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 5


def entry_point() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entry_point()
