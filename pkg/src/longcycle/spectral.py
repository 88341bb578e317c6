"""Periodogram, exact AR(2) spectrum, and the long-cycle periodogram limit.

For a long-cycle process the periodogram at scaled frequencies omega = h/n
does not estimate the spectrum: n^-4 E I_n(h/n) converges to a quadrature
expression whose peak sits to the left of the true spectral peak, so
periodogram-based cycle lengths are biased upward even asymptotically.
This module computes all three curves so the bias can be exhibited:

    periodogram               I_n(omega) = (1/2 pi n) |sum_t y_t e^{-i omega t}|^2
    theoretical               f_n(omega) = (s2/2 pi) / |(1 - l1 e^{i w})(1 - l2 e^{i w})|^2
    expected limit            g(h) = (s2/2 pi^2) * Int (1-cos(h-x))/(h-x)^2
                                       / ((c^2+(d+x)^2)(c^2+(d-x)^2)) dx

plus a single draw from the limiting periodogram law (a functional of the
cycle diffusion) and a local-to-unity t-statistic that discriminates unit
roots from long cycles: it stays bounded under the former and grows
linearly in n under the latter.

The periodogram is a direct Fourier sum rather than an FFT because the
frequencies of interest, h/n, are generally off the Fourier grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core_model import Localization, phi_from_cd
from .dgp import Series
from .diffusion import simulate_path
from .errors import ArgumentError, QuadratureError, SingularityError

# Half-width of the patch window around the removable singularity at
# x = h, inside which the series value of (1 - cos u)/u^2 is used.
_PATCH = 1e-6

# Target relative accuracy for the limit-curve quadrature, including the
# truncation tail.
_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class SpectrumCurve:
    """A spectrum-like curve on a strictly increasing frequency grid.

    `frequencies` are radians for the periodogram and theoretical kinds,
    and scaled values h = n * omega for the expected-limit kind.
    """

    frequencies: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        f = np.asarray(self.frequencies, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if f.ndim != 1 or v.shape != f.shape:
            raise ArgumentError("frequencies and values must be 1-D and the same length")
        if f.size > 1 and np.any(np.diff(f) <= 0):
            raise ArgumentError("frequency grid must be strictly increasing")
        if np.any(v < 0):
            raise ArgumentError("spectrum values must be nonnegative")
        if self.kind not in ("periodogram", "theoretical", "expected_limit"):
            raise ArgumentError(f"unknown curve kind {self.kind!r}")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)


def fourier_frequencies(n: int) -> np.ndarray:
    """Positive Fourier frequencies 2 pi j / n, j = 1..floor(n/2)."""
    return 2.0 * math.pi * np.arange(1, n // 2 + 1) / n


def periodogram(series: Series, freq_grid=None) -> SpectrumCurve:
    """I_n(omega) = (1/2 pi n)|sum_{t=1}^n y_t e^{-i omega t}|^2 per grid point."""
    y = np.asarray(series.values, dtype=float)
    n = y.size
    if n < 8:
        raise ArgumentError(f"periodogram needs n >= 8, got {n}")
    freqs = fourier_frequencies(n) if freq_grid is None else np.asarray(freq_grid, dtype=float)
    t = np.arange(1, n + 1)
    vals = np.empty(freqs.size)
    # Chunk the outer product so very fine grids stay within memory.
    step = max(1, int(4e6 // max(n, 1)))
    for lo in range(0, freqs.size, step):
        w = freqs[lo : lo + step]
        z = np.exp(-1j * np.outer(w, t)) @ y
        vals[lo : lo + step] = (z.real**2 + z.imag**2) / (2.0 * math.pi * n)
    return SpectrumCurve(freqs, vals, "periodogram")


def theoretical_spectrum(loc: Localization, n: int, sigma2_u: float, freq_grid) -> SpectrumCurve:
    """Exact spectral density of the long-cycle AR(2) at sample size n."""
    loc.validate()
    if sigma2_u <= 0:
        raise ArgumentError(f"sigma2_u must be > 0, got {sigma2_u}")
    phi = phi_from_cd(loc, n)
    w = np.asarray(freq_grid, dtype=float)
    z = np.exp(1j * w)
    denom = np.abs(1.0 - phi.phi1 * z - phi.phi2 * z * z) ** 2
    vals = (sigma2_u / (2.0 * math.pi)) / denom
    return SpectrumCurve(w, vals, "theoretical")


def _kernel(u: float) -> float:
    if abs(u) < _PATCH:
        return 0.5 - u * u / 24.0
    return (1.0 - math.cos(u)) / (u * u)


def expected_limit_value(loc: Localization, sigma2_u: float, h: float) -> float:
    """One point of the expected scaled-periodogram limit, by quadrature.

    The x integral runs over the whole line; it is truncated at |x| <= X
    with X grown until the analytic tail envelope 8/(5 (X - m)^5), with
    m = max(d, |h|), is below the relative target. The integrand depends
    on c only through c^2, so the sign convention of c is irrelevant; c
    itself must be nonzero or the poles at x = +-d are non-integrable.
    """
    c2 = loc.c * loc.c
    d = loc.d
    if c2 == 0.0:
        raise ArgumentError("expected_periodogram_limit requires c != 0")

    def integrand(x: float) -> float:
        return _kernel(h - x) / ((c2 + (d + x) ** 2) * (c2 + (d - x) ** 2))

    m = max(d, abs(h))
    X = m + 200.0
    val = None
    for _ in range(3):
        pts = sorted({p for p in (-d, 0.0, h - _PATCH, h, h + _PATCH, d) if -X < p < X})
        val, abserr = quad(integrand, -X, X, points=pts, limit=400, epsabs=0.0, epsrel=1e-10)
        tail = 8.0 / (5.0 * (X - m) ** 5)
        scale = max(abs(val), 1e-300)
        if tail <= _QUAD_RTOL * scale and abserr <= 10.0 * _QUAD_RTOL * scale:
            break
        if tail > _QUAD_RTOL * scale:
            X = m + max(2.0 * (X - m), (8.0 / (5.0 * _QUAD_RTOL * scale)) ** 0.2)
    else:
        achieved = max(tail, abserr) / max(abs(val), 1e-300)
        raise QuadratureError(
            f"limit-curve quadrature at h={h:g} did not reach rtol={_QUAD_RTOL:g}",
            achieved=achieved,
        )
    return sigma2_u / (2.0 * math.pi**2) * val


def expected_periodogram_limit(loc: Localization, sigma2_u: float, h_grid) -> SpectrumCurve:
    """lim n^-4 E I_n(h/n) over a grid of scaled frequencies h."""
    loc.validate()
    if sigma2_u <= 0:
        raise ArgumentError(f"sigma2_u must be > 0, got {sigma2_u}")
    h = np.asarray(h_grid, dtype=float)
    vals = np.array([expected_limit_value(loc, sigma2_u, float(hv)) for hv in h])
    return SpectrumCurve(h, vals, "expected_limit")


def limit_periodogram_draw(loc: Localization, h: float, dt: float = 0.01, seed: int = 0) -> float:
    """One draw of (1/2 pi)|Int_0^1 J(r) e^{-i h r} dr|^2 via an Euler path.

    The time integral uses the left rectangle rule on the same grid as the
    path, matching the convention of every other path functional.
    """
    path = simulate_path(loc, dt, seed)
    N = path.n_steps
    r = path.grid[:N]
    z = np.sum(path.J[:N] * np.exp(-1j * h * r)) * path.dt
    return float((z.real**2 + z.imag**2) / (2.0 * math.pi))


def ltu_t_statistic(series: Series, b: float) -> float:
    """Unnormalized AR(1) t-statistic against the local-to-unity root e^{b/n}.

    t = (a_hat - e^{b/n}) * (sum_t y_{t-1}^2)^{1/2} with a_hat the OLS
    slope of y_t on y_{t-1}. Under a local-to-unity null this is O_p(1);
    under a long cycle it grows like n, which is the discrimination.
    """
    y = np.asarray(series.values, dtype=float)
    n = y.size
    if n < 8:
        raise ArgumentError(f"ltu_t_statistic needs n >= 8, got {n}")
    y0 = y[:-1]
    ss = float(y0 @ y0)
    if ss <= 0.0:
        raise SingularityError("sum of squared lags is zero; AR(1) slope undefined")
    a_hat = float(y0 @ y[1:]) / ss
    return (a_hat - math.exp(b / n)) * math.sqrt(ss)


def write_spectrum_csv(curves: list[SpectrumCurve], path, meta: dict | None = None) -> None:
    """Rows `freq,value,kind`, one block per curve, with `# key=value` headers."""
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append("freq,value,kind")
    for curve in curves:
        for f, v in zip(curve.frequencies, curve.values):
            lines.append(f"{f:.17g},{v:.17g},{curve.kind}")
    from pathlib import Path

    Path(path).write_text("\n".join(lines) + "\n")
