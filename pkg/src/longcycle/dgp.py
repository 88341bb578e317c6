"""Finite-sample data generation.

Simulates long-cycle processes (drifting AR(2) coefficients indexed by the
sample size), fixed-coefficient AR(2) processes, deterministic components,
and innovations that are either iid normal or an AR(p) of normals.

Conventions that matter for reproducing the asymptotics:

* the cyclical component starts from zero pre-sample values
  (y_0 = y_{-1} = 0), matching the moving-average solution that drives the
  weak convergence to the limiting diffusion;
* fixed-coefficient simulation discards a 500-draw burn-in so the path is
  approximately stationary, long-cycle simulation discards nothing;
* AR innovations are warmed up on a fixed 500-step prefix of their own;
* deterministic components are evaluated at t = 1..n.

All randomness flows through keyed Philox streams (see _rng), so output is
bit-identical for identical arguments and seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from ._rng import substream
from .core_model import ARCoefficients, Localization, phi_from_cd
from .errors import ArgumentError

_AR_WARMUP = 500
_FIXED_BURN = 500


@dataclass(frozen=True)
class InnovationSpec:
    """Innovation process u_t: iid normal, or AR(p) driven by iid normal.

    For the AR kind, coeffs are (rho_1, .., rho_p) in
    u_t = rho_1 u_{t-1} + ... + rho_p u_{t-p} + eps_t.
    """

    kind: str  # "iid_normal" | "ar"
    sigma: float = 1.0
    coeffs: tuple[float, ...] = ()
    sigma_eps: float = 1.0

    @staticmethod
    def iid_normal(sigma: float = 1.0) -> "InnovationSpec":
        return InnovationSpec(kind="iid_normal", sigma=sigma)

    @staticmethod
    def ar(coeffs, sigma_eps: float = 1.0) -> "InnovationSpec":
        return InnovationSpec(kind="ar", coeffs=tuple(float(c) for c in coeffs), sigma_eps=sigma_eps)

    def validate(self, margin: float = 0.05) -> "InnovationSpec":
        if self.kind == "iid_normal":
            if not self.sigma >= 0.0:
                raise ArgumentError(f"sigma must be >= 0, got {self.sigma}")
            return self
        if self.kind != "ar":
            raise ArgumentError(f"unknown innovation kind {self.kind!r}")
        if not self.sigma_eps >= 0.0:
            raise ArgumentError(f"sigma_eps must be >= 0, got {self.sigma_eps}")
        if len(self.coeffs) == 0:
            return self
        # Characteristic roots of z^p - rho_1 z^{p-1} - ... - rho_p must be
        # inside the unit circle with the requested margin.
        roots = np.roots(np.concatenate(([1.0], -np.asarray(self.coeffs))))
        if roots.size and np.max(np.abs(roots)) > 1.0 - margin:
            raise ArgumentError(
                f"AR innovation coefficients {self.coeffs} have a characteristic root of "
                f"modulus {np.max(np.abs(roots)):.4f} > {1.0 - margin}"
            )
        return self

    @property
    def variance(self) -> float:
        """Var(u_t) (stationary), exact for p <= 1, simulated otherwise."""
        if self.kind == "iid_normal":
            return self.sigma**2
        if len(self.coeffs) == 0:
            return self.sigma_eps**2
        if len(self.coeffs) == 1:
            return self.sigma_eps**2 / (1.0 - self.coeffs[0] ** 2)
        # General AR(p) stationary variance via the Yule-Walker system.
        p = len(self.coeffs)
        rho = np.asarray(self.coeffs)
        # Solve for autocovariances gamma_0..gamma_p.
        A = np.zeros((p + 1, p + 1))
        b = np.zeros(p + 1)
        b[0] = self.sigma_eps**2
        A[0, 0] = 1.0
        for j in range(1, p + 1):
            A[0, j] -= rho[j - 1]
        for k in range(1, p + 1):
            A[k, k] += 1.0
            for j in range(1, p + 1):
                A[k, abs(k - j)] -= rho[j - 1] if abs(k - j) <= p else 0.0
        return float(np.linalg.solve(A, b)[0])

    @property
    def long_run_variance(self) -> float:
        """(sum of all autocovariances) = sigma_eps^2 / (1 - sum rho)^2."""
        if self.kind == "iid_normal":
            return self.sigma**2
        s = sum(self.coeffs)
        return self.sigma_eps**2 / (1.0 - s) ** 2


@dataclass(frozen=True)
class DetSpec:
    """Deterministic component D_t evaluated at t = 1..n.

    kind "none":     D_t = 0 (mu ignored)
    kind "constant": D_t = mu
    kind "cycles":   D_t = mu + sum_k theta_cos[k] cos(2 pi k t / n)
                               + theta_sin[k] sin(2 pi k t / n), k in ks
    kind "trend":    D_t = mu + xi t / n
    kind "seasonal": D_t = mu + gamma[(t - 1) mod period]
    """

    kind: str = "constant"
    mu: float = 0.0
    ks: tuple[int, ...] = (1,)
    theta_cos: tuple[float, ...] = ()
    theta_sin: tuple[float, ...] = ()
    xi: float = 0.0
    period: int = 0
    gamma: tuple[float, ...] = ()

    def validate(self) -> "DetSpec":
        if self.kind not in ("none", "constant", "cycles", "trend", "seasonal"):
            raise ArgumentError(f"unknown deterministic kind {self.kind!r}")
        if self.kind == "cycles":
            if not self.ks or any(k < 1 for k in self.ks):
                raise ArgumentError(f"cycle harmonics must be positive integers, got {self.ks}")
            for name, coef in (("theta_cos", self.theta_cos), ("theta_sin", self.theta_sin)):
                if coef and len(coef) != len(self.ks):
                    raise ArgumentError(f"{name} must have one entry per harmonic in ks")
        if self.kind == "seasonal":
            if self.period < 2:
                raise ArgumentError(f"seasonal period must be >= 2, got {self.period}")
            if self.gamma and len(self.gamma) != self.period:
                raise ArgumentError("gamma must have one entry per season")
        return self

    @property
    def token(self) -> str:
        """Estimation-side kind token, e.g. 'cycles:1,2' or 'seasonal:4'."""
        if self.kind == "cycles":
            return "cycles:" + ",".join(str(k) for k in sorted(self.ks))
        if self.kind == "seasonal":
            return f"seasonal:{self.period}"
        return self.kind


@dataclass
class Series:
    """A univariate series with a little metadata."""

    values: np.ndarray
    name: str = ""
    period: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return int(self.values.shape[0])


def build_deterministic(det: DetSpec, n: int) -> np.ndarray:
    """Evaluate D_t at t = 1..n as a length-n array."""
    det.validate()
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    t = np.arange(1, n + 1, dtype=float)
    out = np.zeros(n) if det.kind == "none" else np.full(n, float(det.mu))
    if det.kind == "cycles":
        tc = det.theta_cos or (0.0,) * len(det.ks)
        ts = det.theta_sin or (0.0,) * len(det.ks)
        for k, a, b in zip(det.ks, tc, ts):
            w = 2.0 * np.pi * k * t / n
            out += a * np.cos(w) + b * np.sin(w)
    elif det.kind == "trend":
        out += det.xi * t / n
    elif det.kind == "seasonal":
        gamma = det.gamma or (0.0,) * det.period
        out += np.asarray(gamma)[(np.arange(n)) % det.period]
    return out


def seasonal_dummies(period: int, n: int) -> np.ndarray:
    """Full indicator matrix (n x period); season of t is (t-1) mod period."""
    s = np.arange(n) % period
    return (s[:, None] == np.arange(period)[None, :]).astype(float)


def simulate_innovations(innov: InnovationSpec, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw u_1..u_m. AR innovations are warmed up on a fixed prefix."""
    innov.validate()
    if innov.kind == "iid_normal":
        return innov.sigma * rng.standard_normal(m)
    eps = innov.sigma_eps * rng.standard_normal(m + _AR_WARMUP)
    if len(innov.coeffs) == 0:
        return eps[_AR_WARMUP:]
    a = np.concatenate(([1.0], -np.asarray(innov.coeffs)))
    return lfilter([1.0], a, eps)[_AR_WARMUP:]


def _ar2_filter(phi: ARCoefficients, u: np.ndarray) -> np.ndarray:
    # y_t = phi1 y_{t-1} + phi2 y_{t-2} + u_t with zero initial conditions.
    return lfilter([1.0], [1.0, -phi.phi1, -phi.phi2], u)


def simulate_long_cycle(
    loc: Localization, n: int, det: DetSpec, innov: InnovationSpec, seed: int
) -> Series:
    """Simulate y_t = D_t + y^c_t with drifting coefficients phi_from_cd(loc, n).

    The cyclical part starts from zero pre-sample values and uses no
    burn-in: the process is a nonstationary triangular array by design.
    """
    loc.validate()
    if n < 12:
        raise ArgumentError(f"n must be >= 12, got {n}")
    phi = phi_from_cd(loc, n)
    u = simulate_innovations(innov, n, substream(seed))
    yc = _ar2_filter(phi, u)
    values = build_deterministic(det, n) + yc
    return Series(values, name=f"long_cycle(c={loc.c:g},d={loc.d:g})", period=det.period or None)


def simulate_fixed_ar2(
    phi: ARCoefficients,
    n: int,
    det: DetSpec,
    innov: InnovationSpec,
    seed: int,
    burn: int = _FIXED_BURN,
) -> Series:
    """Simulate a fixed-coefficient stationary AR(2) plus deterministic part.

    The first `burn` draws are discarded (default 500) so the retained path
    is approximately stationary. With burn=0 this is exactly the long-cycle
    recursion run at fixed coefficients from zero initial values.
    """
    if n < 12:
        raise ArgumentError(f"n must be >= 12, got {n}")
    if burn < 0:
        raise ArgumentError(f"burn must be >= 0, got {burn}")
    if not phi.stationary:
        raise ArgumentError(f"phi=({phi.phi1}, {phi.phi2}) is outside the stationarity triangle")
    u = simulate_innovations(innov, burn + n, substream(seed))
    y = _ar2_filter(phi, u)[burn:]
    values = build_deterministic(det, n) + y
    return Series(values, name=f"fixed_ar2({phi.phi1:g},{phi.phi2:g})", period=det.period or None)
