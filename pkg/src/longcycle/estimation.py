"""Finite-sample regression machinery.

The test statistic pipeline is: project the series on its deterministic
component, fit the transformed AR(2)

    y~_t = (phi1 + phi2) y~_{t-1} - phi2 (y~_{t-1} - y~_{t-2}) + u_t,

estimate the long-run variance of the residuals by Newey-West, and form
the Wald statistic for a joint null (phi1_0, phi2_0). The transformed
coordinates (phi1 + phi2, phi2) are algebraically equivalent to regressing
on (y~_{t-1}, y~_{t-2}) directly: the Wald statistic is identical either
way, which the test suite asserts.

For serially correlated errors the modified statistic W_{n,p} prewhitens
with an AR(p) fitted to the null-filtered residuals and replaces the HAC
variance with a sandwich built from two auxiliary regressions. Its exact
construction, including the one-lag offset between the dotted series in
the Sigma matrix, follows the published recipe to the letter.

Estimation windows, with 0-based array indices into a length-n series:

* AR(2) fit and null filter           t = 2 .. n-1
* AR(p) fit to filtered residuals     t = p+2 .. n-1
* prewhitened series x^_t             t = p   .. n-1
* main regression and M, sigma2_eps   t = p+2 .. n-1
* dotted regressions (anchor t)       t = p+1 .. n-1
* Sigma sums (anchor t-1)             t = p+2 .. n-1
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_model import ARCoefficients
from .dgp import Series, seasonal_dummies
from .errors import ArgumentError, SingularityError

_COND_LIMIT = 1e12
_LRV_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# Deterministic designs


def parse_det_kind(token: str) -> tuple[str, tuple[int, ...], int]:
    """Split a kind token into (kind, harmonics, period)."""
    if token in ("none", "constant", "trend"):
        return token, (), 0
    if token == "cycles":
        return "cycles", (1,), 0
    if token.startswith("cycles:"):
        ks = tuple(sorted(int(k) for k in token.split(":", 1)[1].split(",") if k))
        if not ks or any(k < 1 for k in ks):
            raise ArgumentError(f"bad cycles token {token!r}")
        return "cycles", ks, 0
    if token.startswith("seasonal:"):
        period = int(token.split(":", 1)[1])
        if period < 2:
            raise ArgumentError(f"seasonal period must be >= 2, got {period}")
        return "seasonal", (), period
    if token == "seasonal":
        raise ArgumentError("seasonal kind needs a period, e.g. 'seasonal:4'")
    raise ArgumentError(f"unknown deterministic kind {token!r}")


def deterministic_design(token: str, n: int) -> np.ndarray:
    """Regression design for D_t at t = 1..n; shape (n, k), k 0 for 'none'.

    Seasonal uses an intercept plus period-1 dummies (first season is the
    base level), so the design spans the same space as full dummies.
    """
    kind, ks, period = parse_det_kind(token)
    if kind == "none":
        return np.empty((n, 0))
    t = np.arange(1, n + 1, dtype=float)
    cols = [np.ones(n)]
    if kind == "cycles":
        for k in ks:
            w = 2.0 * np.pi * k * t / n
            cols.append(np.cos(w))
            cols.append(np.sin(w))
    elif kind == "trend":
        cols.append(t / n)
    elif kind == "seasonal":
        cols.extend(seasonal_dummies(period, n)[:, 1:].T)
    return np.column_stack(cols)


def detrend(series: Series, det_kind: str) -> Series:
    """OLS residuals from projecting the series on its deterministic design."""
    y = np.asarray(series.values, dtype=float)
    n = y.shape[0]
    D = deterministic_design(det_kind, n)
    if D.shape[1] == 0:
        return Series(y.copy(), name=series.name, period=series.period)
    if n <= D.shape[1] + 4:
        raise ArgumentError(f"series of length {n} too short to project on {D.shape[1]} columns")
    coef, _, rank, _ = np.linalg.lstsq(D, y, rcond=None)
    if rank < D.shape[1]:
        raise SingularityError(f"deterministic design for {det_kind!r} is rank deficient (rank {rank})")
    return Series(y - D @ coef, name=series.name, period=series.period)


# ---------------------------------------------------------------------------
# AR(2) fit and Wald statistic


@dataclass
class FitResult:
    phi_sum_hat: float
    phi2_hat: float
    phi1_hat: float
    residuals: np.ndarray
    sigma2_u_hat: float
    sigma2_lr_hat: float
    bic: float
    det_kind: str
    n_used: int
    gram: np.ndarray  # X'X of the transformed regression, 2x2

    @property
    def phi(self) -> ARCoefficients:
        return ARCoefficients(self.phi1_hat, self.phi2_hat)


def _solve_checked(A: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularityError(f"{what} is numerically singular (condition {cond:.3e})", condition=float(cond))
    return np.linalg.solve(A, b)


def fit_ar2(series: Series, det_kind: str) -> FitResult:
    """Fit the transformed AR(2) on detrended data.

    Regresses y~_t on (y~_{t-1}, y~_{t-1} - y~_{t-2}); the coefficient pair
    is (phi1 + phi2, -phi2).
    """
    yt = detrend(series, det_kind).values
    n = yt.shape[0]
    if n < 12:
        raise ArgumentError(f"need n >= 12 observations, got {n}")
    target = yt[2:]
    lag1 = yt[1:-1]
    dlag = yt[1:-1] - yt[:-2]
    X = np.column_stack([lag1, dlag])
    gram = X.T @ X
    b = _solve_checked(gram, X.T @ target, "AR(2) Gram matrix")
    resid = target - X @ b
    n_used = target.shape[0]
    sigma2_u = float(resid @ resid) / n_used
    sigma2_lr, _ = long_run_variance(resid, return_flag=True)
    k = deterministic_design(det_kind, n).shape[1] + 2
    rss = float(resid @ resid)
    bic = n_used * math.log(max(rss / n_used, 1e-300)) + k * math.log(n_used)
    phi_sum = float(b[0])
    phi2 = float(-b[1])
    return FitResult(
        phi_sum_hat=phi_sum,
        phi2_hat=phi2,
        phi1_hat=phi_sum - phi2,
        residuals=resid,
        sigma2_u_hat=sigma2_u,
        sigma2_lr_hat=sigma2_lr,
        bic=bic,
        det_kind=det_kind,
        n_used=n_used,
        gram=gram,
    )


def long_run_variance(residuals, bandwidth: int | None = None, *, return_flag: bool = False):
    """Newey-West long-run variance with Bartlett weights.

    Default bandwidth m = floor(4 (n/100)^{2/9}). With m = 0 the estimate
    equals the plain average of squared residuals. The estimate is floored
    at 1e-12; the optional flag reports whether the floor was hit.
    """
    r = np.asarray(residuals, dtype=float)
    n = r.shape[0]
    if n < 8:
        raise ArgumentError(f"need at least 8 residuals, got {n}")
    m = int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0))) if bandwidth is None else int(bandwidth)
    if m < 0:
        raise ArgumentError(f"bandwidth must be >= 0, got {m}")
    v = float(r @ r) / n
    for h in range(1, min(m, n - 1) + 1):
        w = 1.0 - h / (m + 1.0)
        v += 2.0 * w * float(r[h:] @ r[:-h]) / n
    flagged = not (v > _LRV_FLOOR)
    if flagged:
        v = _LRV_FLOOR
    return (v, flagged) if return_flag else v


def wald_statistic(series: Series, det_kind: str, phi0: ARCoefficients, via: str = "transformed") -> float:
    """Wald statistic for H0: (phi1, phi2) = phi0, HAC-studentized.

    via="transformed" uses the (y~_{t-1}, delta y~_{t-1}) regression;
    via="original" regresses on (y~_{t-1}, y~_{t-2}). The two give the
    same number up to rounding.
    """
    if via == "transformed":
        fit = fit_ar2(series, det_kind)
        return float(wald_grid(fit, np.asarray([phi0.phi1]), np.asarray([phi0.phi2]))[0])
    if via != "original":
        raise ArgumentError(f"via must be 'transformed' or 'original', got {via!r}")
    yt = detrend(series, det_kind).values
    target = yt[2:]
    X = np.column_stack([yt[1:-1], yt[:-2]])
    gram = X.T @ X
    b = _solve_checked(gram, X.T @ target, "AR(2) Gram matrix")
    resid = target - X @ b
    s2 = long_run_variance(resid)
    e = b - np.array([phi0.phi1, phi0.phi2])
    return float(e @ gram @ e) / s2


def wald_grid(fit: FitResult, phi1_0: np.ndarray, phi2_0: np.ndarray) -> np.ndarray:
    """Vectorized Wald statistics from one fit over arrays of null values."""
    e1 = (fit.phi_sum_hat) - (phi1_0 + phi2_0)
    e2 = (-fit.phi2_hat) - (-phi2_0)
    g = fit.gram
    quad = g[0, 0] * e1 * e1 + 2.0 * g[0, 1] * e1 * e2 + g[1, 1] * e2 * e2
    return quad / fit.sigma2_lr_hat


# ---------------------------------------------------------------------------
# Modified Wald statistic


@dataclass
class ModifiedWaldContext:
    """Intermediate quantities of one W_{n,p} evaluation."""

    p: int
    rho_hat: np.ndarray
    xhat: np.ndarray
    sigma2_eps_hat: float
    M: np.ndarray
    Sigma: np.ndarray
    phi_hat: np.ndarray


class ModifiedWaldWorkspace:
    """Detrends once and evaluates W_{n,p} at many null values.

    Inverting a test over a (c, d) grid evaluates the statistic at
    thousands of nulls on the same series; the projection step does not
    depend on the null and is hoisted here.
    """

    def __init__(self, series: Series, det_kind: str, p: int):
        if p < 0:
            raise ArgumentError(f"lag order p must be >= 0, got {p}")
        y = detrend(series, det_kind).values
        n = y.shape[0]
        if n <= p + 12:
            raise ArgumentError(f"need n > p + 12, got n={n}, p={p}")
        self.p = p
        self.y = y
        self.n = n

    def statistic(self, phi0: ARCoefficients, with_context: bool = False):
        p, y, n = self.p, self.y, self.n
        u0 = y[2:] - phi0.phi1 * y[1:-1] - phi0.phi2 * y[:-2]
        if p == 0:
            rho = np.empty(0)
            xh = y
        else:
            # AR(p) for the null-filtered residuals, t = p+2 .. n-1.
            U = np.column_stack([u0[p - l : u0.shape[0] - l] for l in range(1, p + 1)])
            ug = U.T @ U
            rho = _solve_checked(ug, U.T @ u0[p:], "prewhitening Gram matrix")
            # x^_t = y~_t - sum_l rho_l y~_{t-l}, t = p .. n-1.
            xh = y[p:].copy()
            for l in range(1, p + 1):
                xh -= rho[l - 1] * y[p - l : n - l]
        # Main regression x^_t on (x^_{t-1}, x^_{t-2}), t = p+2 .. n-1.
        xt, x1, x2 = xh[2:], xh[1:-1], xh[:-2]
        M = np.array([[x1 @ x1, x1 @ x2], [x1 @ x2, x2 @ x2]])
        phi_hat = _solve_checked(M, np.array([x1 @ xt, x2 @ xt]), "main regression Gram matrix")
        eps = xt - phi_hat[0] * x1 - phi_hat[1] * x2
        sigma2_eps = float(eps @ eps) / xt.shape[0]
        if p == 0:
            Sigma = M
        else:
            # Dotted regressions, anchored at t = p+1 .. n-1: regress x^_t
            # and x^_{t-1} on (u~_t, .., u~_{t-p+1}); the Sigma sums then
            # use the dotted residuals at anchor t-1.
            Ureg = np.column_stack([u0[p - l : u0.shape[0] - l + 1] for l in range(1, p + 1)])
            xs = xh[1:]
            xs1 = xh[:-1]
            ug = Ureg.T @ Ureg
            zeta_dot = _solve_checked(ug, Ureg.T @ xs, "dotted regression Gram matrix")
            zeta_ddot = _solve_checked(ug, Ureg.T @ xs1, "dotted regression Gram matrix")
            dx = xs - Ureg @ zeta_dot
            ddx = xs1 - Ureg @ zeta_ddot
            a, b = dx[:-1], ddx[:-1]
            Sigma = np.array([[a @ a, a @ b], [a @ b, b @ b]])
        delta = phi_hat - np.array([phi0.phi1, phi0.phi2])
        md = M @ delta
        v = _solve_checked(Sigma, md, "Sigma matrix")
        w = float(md @ v) / max(sigma2_eps, _LRV_FLOOR)
        if with_context:
            ctx = ModifiedWaldContext(
                p=p, rho_hat=rho, xhat=xh, sigma2_eps_hat=sigma2_eps, M=M, Sigma=Sigma, phi_hat=phi_hat
            )
            return w, ctx
        return w


def modified_wald(series: Series, det_kind: str, phi0: ARCoefficients, p: int) -> float:
    """AR(p)-prewhitened Wald statistic W_{n,p} for H0: (phi1, phi2) = phi0."""
    return ModifiedWaldWorkspace(series, det_kind, p).statistic(phi0)


# ---------------------------------------------------------------------------
# Specification selection


_DEFAULT_CANDIDATES = ("constant", "cycles:1", "cycles:1,2", "cycles:1,2,3", "trend")


def bic_select(
    series: Series,
    det_kind_candidates=None,
    max_extra_lags: int = 2,
    period: int | None = None,
) -> tuple[str, int]:
    """Choose (deterministic kind, error lag order) by BIC.

    Regresses y_t jointly on each candidate deterministic design and
    y_{t-1}, .., y_{t-q} for q = 0 .. 2 + max_extra_lags, over the common
    window t = max_extra_lags+3 .. n so all criteria are comparable.
    Returns the winning kind token and p = max(q - 2, 0), the implied
    error autocorrelation order.
    """
    if max_extra_lags < 0:
        raise ArgumentError(f"max_extra_lags must be >= 0, got {max_extra_lags}")
    candidates = list(det_kind_candidates) if det_kind_candidates is not None else list(_DEFAULT_CANDIDATES)
    if period is None and series.period:
        period = series.period
    if det_kind_candidates is None and period and period >= 2:
        candidates.append(f"seasonal:{period}")
    y = np.asarray(series.values, dtype=float)
    n = y.shape[0]
    q_max = 2 + max_extra_lags
    t0 = q_max  # first usable 0-based index: lags reach back to t - q_max
    n_eff = n - t0
    widest = max(deterministic_design(tok, n).shape[1] for tok in candidates)
    if n_eff <= widest + q_max + 8:
        raise ArgumentError(f"series too short (n={n}) for BIC selection with max_extra_lags={max_extra_lags}")
    target = y[t0:]
    best = None
    for tok in candidates:
        D = deterministic_design(tok, n)[t0:]
        for q in range(q_max + 1):
            lags = [y[t0 - l : n - l] for l in range(1, q + 1)]
            X = np.column_stack([D] + lags) if (D.shape[1] + q) else np.empty((n_eff, 0))
            if X.shape[1] == 0:
                rss = float(target @ target)
            else:
                coef, _, rank, _ = np.linalg.lstsq(X, target, rcond=None)
                if rank < X.shape[1]:
                    continue
                r = target - X @ coef
                rss = float(r @ r)
            k = D.shape[1] + q
            bic = n_eff * math.log(max(rss / n_eff, 1e-300)) + k * math.log(n_eff)
            if best is None or bic < best[0]:
                best = (bic, tok, q)
    assert best is not None
    _, tok, q = best
    return tok, max(q - 2, 0)
