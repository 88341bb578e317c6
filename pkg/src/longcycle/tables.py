"""Critical-value tables for the limiting Wald law.

The limit distribution W(c,d) is not pivotal: its quantiles depend on the
localization pair and on the deterministic specification. This module
builds quantile surfaces over a (c, d) grid by Monte Carlo, persists them
as versioned CSV files with a checksum, and interpolates lookups
bilinearly between grid points.

Draws are keyed by (seed, c-index, d-index, block), so a table is a pure
function of (det_kind, alpha, grids, R, dt, seed): thread counts and cell
ordering cannot change it.

Default grids follow the widest settings used in practice: 60 log-spaced
|c| values in [0.5, 678] plus c = 0, and 60 log-spaced d values in
(2 pi, 678]. d below 2 pi would mean cycles longer than the sample.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import chi2

from .core_model import Localization
from .diffusion import wald_draw_batch
from .errors import (
    ArgumentError,
    TableChecksumError,
    TableFormatError,
    TableRangeError,
    TableVersionError,
)

SCHEMA_VERSION = 1

C_GRID_MAX = 678.0
C_GRID_ANCHOR = 0.5  # smallest nonzero |c| on the default grid
D_GRID_MAX = 678.0


def default_c_grid(c_abs_max: float = C_GRID_MAX, points: int = 60) -> np.ndarray:
    """c = 0 plus `points` log-spaced negative values down to -c_abs_max."""
    mags = np.geomspace(C_GRID_ANCHOR, c_abs_max, points)
    return np.concatenate([-mags[::-1], [0.0]])


def default_d_grid(d_max: float = D_GRID_MAX, points: int = 60) -> np.ndarray:
    """`points` log-spaced values in (2 pi, d_max]; the lower end is open."""
    return np.geomspace(2.0 * math.pi, d_max, points + 1)[1:]


def table_det_kind(det_kind: str) -> str:
    """Normalize a kind token to its table key.

    Seasonal dummies share the constant-mean limit experiment, and every
    cycles harmonic set gets its own surface.
    """
    if det_kind.startswith("seasonal"):
        return "constant"
    if det_kind == "cycles":
        return "cycles:1"
    return det_kind


@dataclass
class QuantileTable:
    det_kind: str
    alpha: float
    c_grid: np.ndarray
    d_grid: np.ndarray
    q: np.ndarray  # shape (len(c_grid), len(d_grid))
    R: int
    dt: float
    seed: int
    schema: int = SCHEMA_VERSION

    def covers(self, c: float, d: float) -> bool:
        return (
            self.c_grid[0] - 1e-12 <= c <= self.c_grid[-1] + 1e-12
            and self.d_grid[0] - 1e-12 <= d <= self.d_grid[-1] + 1e-12
        )


def _check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise ArgumentError(f"alpha must be in (0, 1), got {alpha}")
    return alpha


def quantile_from_draws(draws: np.ndarray, alpha: float) -> float:
    """Empirical 1-alpha quantile: order statistic ceil((1-alpha) R)."""
    _check_alpha(alpha)
    R = draws.shape[0]
    k = math.ceil((1.0 - alpha) * R)
    k = min(max(k, 1), R)
    return float(np.partition(draws, k - 1)[k - 1])


def _validated_grids(c_grid, d_grid) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray(c_grid, dtype=float)
    d = np.asarray(d_grid, dtype=float)
    if c.size == 0 or d.size == 0:
        raise ArgumentError("grids must be nonempty")
    if np.any(np.diff(c) <= 0) or np.any(np.diff(d) <= 0):
        raise ArgumentError("grids must be strictly increasing")
    if c[-1] > 0:
        raise ArgumentError(f"c grid must satisfy c <= 0, got max {c[-1]}")
    if d[0] <= 0:
        raise ArgumentError(f"d grid must be positive, got min {d[0]}")
    return c, d


def _cells(det_kind, c, d, R, dt, seed, threads, alpha=None, critical=None):
    """Yield per-cell reductions of the shared draw engine, in grid order."""
    kind = table_det_kind(det_kind)

    def one(idx):
        ci, dj = idx
        draws, _ = wald_draw_batch(
            Localization(float(c[ci]), float(d[dj])), (kind,), R, dt, seed, cell_key=(ci, dj)
        )
        w = draws[kind]
        if critical is not None:
            return float(np.mean(w > critical))
        return quantile_from_draws(w, alpha)

    indices = [(ci, dj) for ci in range(c.size) for dj in range(d.size)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, indices))
    return [one(idx) for idx in indices]


def build_table(
    det_kind: str,
    alpha: float,
    c_grid,
    d_grid,
    R: int = 100_000,
    dt: float = 0.01,
    seed: int = 0,
    threads: int | None = None,
) -> QuantileTable:
    """Monte Carlo quantile surface W_{1-alpha}(c, d) on a grid."""
    _check_alpha(alpha)
    if R < 1000:
        raise ArgumentError(f"R must be >= 1000, got {R}")
    c, d = _validated_grids(c_grid, d_grid)
    vals = _cells(det_kind, c, d, R, dt, seed, threads, alpha=alpha)
    q = np.asarray(vals).reshape(c.size, d.size)
    return QuantileTable(table_det_kind(det_kind), alpha, c, d, q, R, dt, seed)


def size_surface(
    det_kind: str,
    c_grid,
    d_grid,
    alpha: float = 0.05,
    R: int = 100_000,
    dt: float = 0.01,
    seed: int = 0,
    threads: int | None = None,
) -> np.ndarray:
    """Rejection rate of the chi-squared(2) critical value under W(c, d).

    Shares its draws with build_table cell by cell, so size <= alpha at a
    cell exactly when the table quantile is <= the chi-squared quantile.
    """
    _check_alpha(alpha)
    c, d = _validated_grids(c_grid, d_grid)
    crit = float(chi2.ppf(1.0 - alpha, 2))
    vals = _cells(det_kind, c, d, R, dt, seed, threads, critical=crit)
    return np.asarray(vals).reshape(c.size, d.size)


def lookup(table: QuantileTable, loc: Localization) -> float:
    """Bilinear interpolation of the quantile surface at (c, d)."""
    c, d = float(loc.c), float(loc.d)
    cg, dg = table.c_grid, table.d_grid
    if c < cg[0] - 1e-12 or c > cg[-1] + 1e-12:
        raise TableRangeError(f"c={c:g} outside table range [{cg[0]:g}, {cg[-1]:g}]")
    if d < dg[0] - 1e-12 or d > dg[-1] + 1e-12:
        raise TableRangeError(f"d={d:g} outside table range [{dg[0]:g}, {dg[-1]:g}]")
    ci = int(np.clip(np.searchsorted(cg, c, side="right") - 1, 0, cg.size - 2)) if cg.size > 1 else 0
    dj = int(np.clip(np.searchsorted(dg, d, side="right") - 1, 0, dg.size - 2)) if dg.size > 1 else 0
    if cg.size == 1 and dg.size == 1:
        return float(table.q[0, 0])
    if cg.size == 1:
        t = (d - dg[dj]) / (dg[dj + 1] - dg[dj])
        return float((1 - t) * table.q[0, dj] + t * table.q[0, dj + 1])
    if dg.size == 1:
        s = (c - cg[ci]) / (cg[ci + 1] - cg[ci])
        return float((1 - s) * table.q[ci, 0] + s * table.q[ci + 1, 0])
    s = (c - cg[ci]) / (cg[ci + 1] - cg[ci])
    t = (d - dg[dj]) / (dg[dj + 1] - dg[dj])
    s = min(max(s, 0.0), 1.0)
    t = min(max(t, 0.0), 1.0)
    q = table.q
    return float(
        (1 - s) * (1 - t) * q[ci, dj]
        + s * (1 - t) * q[ci + 1, dj]
        + (1 - s) * t * q[ci, dj + 1]
        + s * t * q[ci + 1, dj + 1]
    )


# ---------------------------------------------------------------------------
# Persistence


def _header_lines(table: QuantileTable) -> list[str]:
    return [
        f"# schema={table.schema}",
        f"# det_kind={table.det_kind}",
        f"# alpha={table.alpha:.17g}",
        f"# R={table.R}",
        f"# dt={table.dt:.17g}",
        f"# seed={table.seed}",
    ]


def _row_lines(table: QuantileTable) -> list[str]:
    lines = ["c,d,quantile"]
    for ci in range(table.c_grid.size):
        for dj in range(table.d_grid.size):
            lines.append(f"{table.c_grid[ci]:.17g},{table.d_grid[dj]:.17g},{table.q[ci, dj]:.17g}")
    return lines


def save_table(table: QuantileTable, path) -> None:
    """Write the versioned CSV format; round trips are bit exact.

    The crc32 line covers every other line of the file, so truncation or
    edits anywhere are detected on load.
    """
    path = Path(path)
    header = _header_lines(table)
    rows = _row_lines(table)
    payload = "\n".join(header + rows).encode() + b"\n"
    crc = zlib.crc32(payload) & 0xFFFFFFFF
    text = "\n".join(header + [f"# crc32={crc:08x}"] + rows) + "\n"
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def load_table(path) -> QuantileTable:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TableFormatError(f"cannot read table file {path}: {exc}") from exc
    lines = text.splitlines()
    meta: dict[str, str] = {}
    crc_stated = None
    data_start = None
    for i, line in enumerate(lines):
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            if key == "crc32":
                crc_stated = value
            else:
                meta[key] = value
        else:
            data_start = i
            break
    if data_start is None or crc_stated is None:
        raise TableFormatError(f"{path}: missing header or data section")
    if meta.get("schema") != str(SCHEMA_VERSION):
        raise TableVersionError(f"{path}: unsupported schema version {meta.get('schema')!r}")
    payload_lines = [l for l in lines if not l.startswith("# crc32=")]
    payload = "\n".join(payload_lines).encode() + b"\n"
    crc = zlib.crc32(payload) & 0xFFFFFFFF
    if f"{crc:08x}" != crc_stated.strip():
        raise TableChecksumError(f"{path}: checksum mismatch (stated {crc_stated.strip()}, computed {crc:08x})")
    try:
        det_kind = meta["det_kind"]
        alpha = float(meta["alpha"])
        R = int(meta["R"])
        dt = float(meta["dt"])
        seed = int(meta["seed"])
    except (KeyError, ValueError) as exc:
        raise TableFormatError(f"{path}: bad header field: {exc}") from exc
    body = lines[data_start:]
    if not body or body[0] != "c,d,quantile":
        raise TableFormatError(f"{path}: missing column header row")
    cs, ds, qs = [], [], []
    for ln in body[1:]:
        if not ln.strip():
            continue
        parts = ln.split(",")
        if len(parts) != 3:
            raise TableFormatError(f"{path}: malformed row {ln!r}")
        cs.append(float(parts[0]))
        ds.append(float(parts[1]))
        qs.append(float(parts[2]))
    c_grid = np.unique(np.asarray(cs))
    d_grid = np.unique(np.asarray(ds))
    if c_grid.size * d_grid.size != len(qs):
        raise TableFormatError(f"{path}: rows do not form a complete {c_grid.size}x{d_grid.size} grid")
    q = np.full((c_grid.size, d_grid.size), np.nan)
    ci = np.searchsorted(c_grid, np.asarray(cs))
    dj = np.searchsorted(d_grid, np.asarray(ds))
    q[ci, dj] = np.asarray(qs)
    if np.isnan(q).any():
        raise TableFormatError(f"{path}: rows do not form a complete grid")
    return QuantileTable(det_kind, alpha, c_grid, d_grid, q, R, dt, seed)


# ---------------------------------------------------------------------------
# Cache layout and resumable building


def resolve_cache_dir(flag_value: str | None = None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("LONGCYCLE_CACHE_DIR", "").strip()
    if env:
        return Path(env)
    return Path.home() / ".cache" / "longcycle"


def grid_digest(c_grid, d_grid) -> str:
    c = np.ascontiguousarray(np.asarray(c_grid, dtype=float))
    d = np.ascontiguousarray(np.asarray(d_grid, dtype=float))
    crc = zlib.crc32(c.tobytes())
    crc = zlib.crc32(d.tobytes(), crc)
    return f"{crc & 0xFFFFFFFF:08x}"


def cache_file_name(det_kind: str, alpha: float, R: int, dt: float, seed: int, c_grid, d_grid) -> str:
    kind = table_det_kind(det_kind).replace(":", "_").replace(",", "-")
    return f"cv_{kind}_a{alpha:g}_R{R}_dt{dt:g}_s{seed}_g{grid_digest(c_grid, d_grid)}.csv"


def build_table_resumable(
    det_kind: str,
    alpha: float,
    c_grid,
    d_grid,
    R: int,
    dt: float,
    seed: int,
    final_path,
    threads: int | None = None,
    progress=None,
    stop_after_cells: int | None = None,
) -> QuantileTable | None:
    """build_table with cell-level checkpointing.

    Completed cells are appended to `<final_path>.partial` as they finish;
    a rerun skips them. Because draws are keyed per cell, a resumed build
    is identical to an uninterrupted one. Returns the table, or None when
    interrupted early by stop_after_cells (a testing hook).
    """
    _check_alpha(alpha)
    c, d = _validated_grids(c_grid, d_grid)
    kind = table_det_kind(det_kind)
    final_path = Path(final_path)
    partial = final_path.with_suffix(final_path.suffix + ".partial")
    header = f"# schema={SCHEMA_VERSION} det_kind={kind} alpha={alpha:.17g} R={R} dt={dt:.17g} seed={seed} grid={grid_digest(c, d)}"
    done: dict[tuple[int, int], float] = {}
    if partial.exists():
        lines = partial.read_text().splitlines()
        if not lines or lines[0] != header:
            raise TableFormatError(
                f"{partial}: existing checkpoint was built with different settings; delete it to restart"
            )
        for ln in lines[1:]:
            if not ln.strip():
                continue
            i, j, val = ln.split(",")
            done[(int(i), int(j))] = float(val)
    else:
        partial.parent.mkdir(parents=True, exist_ok=True)
        partial.write_text(header + "\n")
    todo = [(ci, dj) for ci in range(c.size) for dj in range(d.size) if (ci, dj) not in done]
    if stop_after_cells is not None:
        todo = todo[:stop_after_cells]

    def one(idx):
        ci, dj = idx
        draws, _ = wald_draw_batch(
            Localization(float(c[ci]), float(d[dj])), (kind,), R, dt, seed, cell_key=(ci, dj)
        )
        return idx, quantile_from_draws(draws[kind], alpha)

    with open(partial, "a") as fh:
        if threads and threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = pool.map(one, todo)
                for (ci, dj), val in results:
                    done[(ci, dj)] = val
                    fh.write(f"{ci},{dj},{val:.17g}\n")
                    fh.flush()
                    if progress:
                        progress(len(done), c.size * d.size)
        else:
            for idx in todo:
                (ci, dj), val = one(idx)
                done[(ci, dj)] = val
                fh.write(f"{ci},{dj},{val:.17g}\n")
                fh.flush()
                if progress:
                    progress(len(done), c.size * d.size)
    if len(done) < c.size * d.size:
        return None
    q = np.empty((c.size, d.size))
    for (ci, dj), val in done.items():
        q[ci, dj] = val
    table = QuantileTable(kind, alpha, c, d, q, R, dt, seed)
    save_table(table, final_path)
    partial.unlink(missing_ok=True)
    return table
