"""Grid-inversion confidence sets for the cycle-localization pair.

The confidence set for (c, d) collects every grid point whose null
hypothesis phi0 = phi_from_cd(c, d, n) survives a Wald test against its
own simulated critical value. Cycle-length intervals follow by projecting
the set through tau_theta = 2 pi / d and tau_omega = 2 pi / sqrt(d^2 - c^2).

The projections are monotone in d (and in d^2 - c^2), so intervals are
just extrema over accepted points; no root finding is involved. A set can
be empty (the model is rejected everywhere) and the tau_omega interval can
be unbounded above when the accepted region touches the d = |c| boundary,
where the spectral peak period diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core_model import ARCoefficients, CycleMeasures, Localization, cd_from_phi, phi_from_cd
from .dgp import Series
from .errors import ArgumentError, NumericalError, SingularityError, TableRangeError
from .estimation import ModifiedWaldWorkspace, fit_ar2, wald_grid
from .tables import C_GRID_ANCHOR, D_GRID_MAX, QuantileTable, lookup, table_det_kind

# Accepted points this close to the d = |c| boundary make the upper
# tau_omega endpoint infinite rather than a huge finite number.
_BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Search grid over (c, d), materialized once the sample size is known.

    Defaults: d ranges over (2 pi, min(678, n pi)] because d <= 2 pi means
    a cycle at least as long as the sample and d > n pi aliases past the
    Nyquist argument; c ranges over [-d_max, 0]. Log spacing concentrates
    points near the persistent, slowly-damped corner where the statistic
    moves fastest.
    """

    c_min: float | None = None
    c_points: int = 60
    d_min: float = 2.0 * math.pi
    d_max: float | None = None
    d_points: int = 60
    spacing: str = "log"
    allow_short_cycles: bool = False

    def _validate(self, n: int | None) -> None:
        if self.spacing not in ("log", "linear"):
            raise ArgumentError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.c_points < 1 or self.d_points < 1:
            raise ArgumentError("grid point counts must be >= 1")
        if self.d_min <= 0:
            raise ArgumentError(f"d_min must be > 0, got {self.d_min}")
        if self.d_min < 2.0 * math.pi - 1e-12 and not self.allow_short_cycles:
            raise ArgumentError(
                f"d_min={self.d_min:g} is below 2*pi, i.e. cycles longer than the sample; "
                "set allow_short_cycles=True to override"
            )
        if n is not None and self.d_max is not None and self.d_max > n * math.pi + 1e-9:
            raise ArgumentError(f"d_max={self.d_max:g} exceeds n*pi={n * math.pi:g}")
        if self.c_min is not None and self.c_min > 0:
            raise ArgumentError(f"c_min must be <= 0, got {self.c_min}")

    def resolved_d_max(self, n: int | None) -> float:
        if self.d_max is not None:
            return float(self.d_max)
        if n is None:
            return D_GRID_MAX
        return min(D_GRID_MAX, n * math.pi)

    def d_array(self, n: int | None = None) -> np.ndarray:
        self._validate(n)
        d_max = self.resolved_d_max(n)
        if d_max <= self.d_min:
            raise ArgumentError(f"d_max={d_max:g} must exceed d_min={self.d_min:g}")
        if self.spacing == "log":
            return np.geomspace(self.d_min, d_max, self.d_points + 1)[1:]
        return np.linspace(self.d_min, d_max, self.d_points + 1)[1:]

    def c_array(self, n: int | None = None) -> np.ndarray:
        self._validate(n)
        c_min = -self.resolved_d_max(n) if self.c_min is None else float(self.c_min)
        if c_min == 0.0:
            return np.array([0.0])
        a = abs(c_min)
        if self.spacing == "linear":
            return np.linspace(c_min, 0.0, self.c_points + 1)
        anchor = min(C_GRID_ANCHOR, a)
        mags = np.array([a]) if anchor == a else np.geomspace(anchor, a, self.c_points)
        return np.concatenate([-mags[::-1], [0.0]])

    def arrays(self, n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        return self.c_array(n), self.d_array(n)


@dataclass
class ConfidenceSet:
    """Grid evaluation of the localization test, plus bookkeeping.

    All 2-D arrays are indexed [i, j] for (c_grid[i], d_grid[j]). A point
    where the statistic could not be computed is marked in `failed` and
    counted as rejected.
    """

    det_kind: str
    p: int
    alpha: float
    n: int
    c_grid: np.ndarray
    d_grid: np.ndarray
    phi1_0: np.ndarray
    phi2_0: np.ndarray
    wald: np.ndarray
    critical: np.ndarray
    accepted: np.ndarray
    failed: np.ndarray

    @property
    def n_points(self) -> int:
        return int(self.accepted.size)

    @property
    def n_accepted(self) -> int:
        return int(self.accepted.sum())

    @property
    def n_failed(self) -> int:
        return int(self.failed.sum())


@dataclass(frozen=True)
class CycleInterval:
    """Projection interval for a cycle-length measure, in sample fractions.

    empty means no accepted point supports the measure. unbounded marks an
    infinite upper endpoint; in the degenerate case where every supporting
    point sits exactly on the d = |c| boundary, lower is None as well and
    the interval is the single point at infinity.
    """

    lower: float | None
    upper: float | None
    empty: bool
    unbounded: bool

    def periods(self, n: int) -> tuple[float | None, float | None]:
        lo = None if self.lower is None else self.lower * n
        hi = None if self.upper is None else self.upper * n
        return lo, hi


def _grid_arrays(grid, n: int) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(grid, GridSpec):
        return grid.arrays(n)
    c, d = grid
    return np.asarray(c, dtype=float), np.asarray(d, dtype=float)


def confidence_set(
    series: Series,
    det_kind: str,
    p: int,
    grid: GridSpec | tuple,
    alpha: float,
    table: QuantileTable,
) -> ConfidenceSet:
    """Test every grid point at level alpha against its tabulated quantile.

    p = 0 runs the one-shot Wald sweep on a single fit; p >= 1 reruns the
    serial-correlation-corrected statistic point by point, since its
    prefilter depends on the null. Estimation failures at individual
    points (p >= 1 only) mark those points rejected and are counted in
    `failed` rather than aborting the sweep.
    """
    n = len(series)
    if p < 0:
        raise ArgumentError(f"p must be >= 0, got {p}")
    c_grid, d_grid = _grid_arrays(grid, n)
    if abs(table.alpha - alpha) > 1e-12:
        raise ArgumentError(f"table was built for alpha={table.alpha:g}, requested {alpha:g}")
    want = table_det_kind(det_kind)
    if table.det_kind != want:
        raise ArgumentError(f"table covers det_kind={table.det_kind!r}, requested {want!r}")
    if not table.covers(c_grid[0], d_grid[0]) or not table.covers(c_grid[-1], d_grid[-1]):
        raise TableRangeError(
            f"grid spans c in [{c_grid[0]:g}, {c_grid[-1]:g}], d in [{d_grid[0]:g}, {d_grid[-1]:g}] "
            f"but table covers c in [{table.c_grid[0]:g}, {table.c_grid[-1]:g}], "
            f"d in [{table.d_grid[0]:g}, {table.d_grid[-1]:g}]"
        )

    nc, nd = c_grid.size, d_grid.size
    phi1_0 = np.empty((nc, nd))
    phi2_0 = np.empty((nc, nd))
    critical = np.empty((nc, nd))
    for i, cv in enumerate(c_grid):
        for j, dv in enumerate(d_grid):
            loc = Localization(float(cv), float(dv))
            phi = phi_from_cd(loc, n)
            phi1_0[i, j] = phi.phi1
            phi2_0[i, j] = phi.phi2
            critical[i, j] = lookup(table, loc)

    failed = np.zeros((nc, nd), dtype=bool)
    if p == 0:
        fit = fit_ar2(series, det_kind)
        wald = wald_grid(fit, phi1_0, phi2_0)
    else:
        ws = ModifiedWaldWorkspace(series, det_kind, p)
        wald = np.empty((nc, nd))
        for i in range(nc):
            for j in range(nd):
                try:
                    wald[i, j] = ws.statistic(ARCoefficients(phi1_0[i, j], phi2_0[i, j]))
                except (SingularityError, NumericalError):
                    wald[i, j] = np.inf
                    failed[i, j] = True
    accepted = (wald <= critical) & ~failed
    return ConfidenceSet(
        det_kind, p, alpha, n, c_grid, d_grid, phi1_0, phi2_0, wald, critical, accepted, failed
    )


def project_tau_theta(cs: ConfidenceSet) -> CycleInterval:
    """Interval for tau_theta = 2 pi / d over the accepted region."""
    if not cs.accepted.any():
        return CycleInterval(None, None, True, False)
    cols = np.where(cs.accepted.any(axis=0))[0]
    d_lo, d_hi = cs.d_grid[cols[0]], cs.d_grid[cols[-1]]
    return CycleInterval(2.0 * math.pi / d_hi, 2.0 * math.pi / d_lo, False, False)


def project_tau_omega(cs: ConfidenceSet) -> CycleInterval:
    """Interval for tau_omega = 2 pi / sqrt(d^2 - c^2), d >= |c| points only."""
    C, D = np.meshgrid(cs.c_grid, cs.d_grid, indexing="ij")
    support = cs.accepted & (D >= np.abs(C))
    if not support.any():
        return CycleInterval(None, None, True, False)
    gap = D[support] ** 2 - C[support] ** 2
    at_boundary = gap < _BOUNDARY_TOL
    finite = ~at_boundary
    unbounded = bool(at_boundary.any())
    if not finite.any():
        return CycleInterval(None, None, False, True)
    taus = 2.0 * math.pi / np.sqrt(gap[finite])
    lower = float(taus.min())
    upper = None if unbounded else float(taus.max())
    return CycleInterval(lower, upper, False, unbounded)


def point_estimate(series: Series, det_kind: str) -> tuple[Localization, CycleMeasures] | None:
    """Invert the fitted AR(2) coefficients to (c_hat, d_hat), if cyclical.

    Returns None when the fit has real roots or phi2_hat >= 0, in which
    case no cycle interpretation exists. c_hat can be positive (explosive
    point estimate); the measures are still well defined through d^2 - c^2.
    """
    fit = fit_ar2(series, det_kind)
    n = len(series)
    loc = cd_from_phi(fit.phi, n)
    if loc is None:
        return None
    tau_theta = 2.0 * math.pi / loc.d
    gap = loc.d * loc.d - loc.c * loc.c
    if gap < 0.0:
        tau_omega: float | None = None
    elif gap < _BOUNDARY_TOL:
        tau_omega = math.inf
    else:
        tau_omega = 2.0 * math.pi / math.sqrt(gap)
    return loc, CycleMeasures(tau_theta, tau_omega)


# ---------------------------------------------------------------------------
# CSV output


def _meta_header(meta: dict) -> list[str]:
    return [f"# {k}={v}" for k, v in meta.items()]


def write_confidence_set_csv(cs: ConfidenceSet, path, meta: dict | None = None) -> None:
    """Rows `c,d,phi1_0,phi2_0,wald,critical,accepted` over the full grid."""
    lines = _meta_header(meta or {})
    lines.append("c,d,phi1_0,phi2_0,wald,critical,accepted")
    for i, cv in enumerate(cs.c_grid):
        for j, dv in enumerate(cs.d_grid):
            lines.append(
                f"{cv:.17g},{dv:.17g},{cs.phi1_0[i, j]:.17g},{cs.phi2_0[i, j]:.17g},"
                f"{cs.wald[i, j]:.17g},{cs.critical[i, j]:.17g},"
                f"{'true' if cs.accepted[i, j] else 'false'}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def _interval_fields(iv: CycleInterval, n: int) -> list[str]:
    if iv.empty:
        return ["", "", "", "", "true", "false"]

    def fmt(x: float | None) -> str:
        return "inf" if x is None else f"{x:.17g}"

    lo_p, hi_p = iv.periods(n)
    return [
        fmt(iv.lower),
        fmt(iv.upper),
        fmt(lo_p),
        fmt(hi_p),
        "false",
        "true" if iv.unbounded else "false",
    ]


def write_intervals_csv(
    theta: CycleInterval, omega: CycleInterval, n: int, path, meta: dict | None = None
) -> None:
    """One row per measure; fractions of the sample and periods side by side."""
    lines = _meta_header(meta or {})
    lines.append("measure,lower_frac,upper_frac,lower_periods,upper_periods,empty,unbounded")
    lines.append("tau_theta," + ",".join(_interval_fields(theta, n)))
    lines.append("tau_omega," + ",".join(_interval_fields(omega, n)))
    Path(path).write_text("\n".join(lines) + "\n")
