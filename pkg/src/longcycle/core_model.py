"""Closed-form maps for the long-cycle AR(2) model.

A long-cycle process is an AR(2) whose complex-conjugate roots drift toward
the unit circle with the sample size n:

    lambda = exp((c + i d) / n),  conj(lambda)       (c <= 0, d > 0)

so the autoregressive polynomial is (1 - phi1 L - phi2 L^2) with

    phi1 = 2 exp(c/n) cos(d/n),   phi2 = -exp(2c/n).

The pair (c, d) fixes two cycle-length measures, both expressed as a
fraction of the sample:

    tau_theta = 2 pi / d                  (root argument)
    tau_omega = 2 pi / sqrt(d^2 - c^2)    (spectrum peak, needs d >= |c|)

This module holds those maps, their inverses, the spectrum peak frequency
of a general AR(2), and impulse-response weights. Everything here is a pure
function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError

# Clamp tolerance for arccos arguments that land just outside [-1, 1]
# from rounding; anything farther out is treated as a genuine violation.
_ACOS_CLAMP = 1e-12


@dataclass(frozen=True)
class Localization:
    """Localization parameters (c, d): persistence and frequency."""

    c: float
    d: float

    def validate(self) -> "Localization":
        if not (math.isfinite(self.c) and math.isfinite(self.d)):
            raise ArgumentError(f"localization must be finite, got (c={self.c}, d={self.d})")
        if self.c > 0:
            raise ArgumentError(f"c must be <= 0 (explosive roots excluded), got c={self.c}")
        if self.d <= 0:
            raise ArgumentError(f"d must be > 0, got d={self.d}")
        return self


@dataclass(frozen=True)
class ARCoefficients:
    """AR(2) coefficient pair (phi1, phi2)."""

    phi1: float
    phi2: float

    @property
    def has_complex_roots(self) -> bool:
        return self.phi1 * self.phi1 + 4.0 * self.phi2 < 0.0

    @property
    def stationary(self) -> bool:
        # Stationarity triangle: phi2 > -1, phi1 + phi2 < 1, phi2 - phi1 < 1.
        return self.phi2 > -1.0 and self.phi1 + self.phi2 < 1.0 and self.phi2 - self.phi1 < 1.0


@dataclass(frozen=True)
class CycleMeasures:
    """Cycle lengths as fractions of the sample size.

    tau_omega is None when the spectrum has no interior peak (d < |c|) and
    math.inf on the boundary d = |c| where the peak frequency tends to zero.
    """

    tau_theta: float
    tau_omega: float | None


def _check_n(n: int) -> int:
    if not isinstance(n, (int,)) or isinstance(n, bool) or n < 3:
        raise ArgumentError(f"n must be an integer >= 3, got {n!r}")
    return n


def phi_from_cd(loc: Localization, n: int) -> ARCoefficients:
    """AR(2) coefficients of the long-cycle model at sample size n.

    phi1 = 2 exp(c/n) cos(d/n), phi2 = -exp(2c/n). The output always has
    complex roots of modulus exp(c/n) <= 1.
    """
    loc.validate()
    _check_n(n)
    r = math.exp(loc.c / n)
    return ARCoefficients(2.0 * r * math.cos(loc.d / n), -r * r)


def cd_from_phi(phi: ARCoefficients, n: int) -> Localization | None:
    """Invert phi_from_cd; None when the coefficients are acyclical.

    Defined only for complex roots, which requires phi2 < 0, a negative
    discriminant, and |phi1 / (2 sqrt(-phi2))| <= 1. Returns

        c = (n/2) ln(-phi2),  d = n arccos(phi1 / (2 sqrt(-phi2))).

    Estimated coefficients with explosive modulus map to c > 0; callers
    that need the c <= 0 contract must validate the result themselves.
    """
    _check_n(n)
    if phi.phi2 >= 0.0:
        return None
    if phi.phi1 * phi.phi1 + 4.0 * phi.phi2 >= 0.0:
        return None
    arg = phi.phi1 / (2.0 * math.sqrt(-phi.phi2))
    if abs(arg) > 1.0:
        if abs(arg) > 1.0 + _ACOS_CLAMP:
            return None
        arg = math.copysign(1.0, arg)
    c = 0.5 * n * math.log(-phi.phi2)
    d = n * math.acos(arg)
    if d <= 0.0:
        return None
    return Localization(c, d)


def cycle_measures(loc: Localization) -> CycleMeasures:
    """Both cycle-length measures for a localization pair."""
    loc.validate()
    tau_theta = 2.0 * math.pi / loc.d
    gap = loc.d * loc.d - loc.c * loc.c
    if gap < 0.0:
        tau_omega = None
    elif gap == 0.0:
        tau_omega = math.inf
    else:
        tau_omega = 2.0 * math.pi / math.sqrt(gap)
    return CycleMeasures(tau_theta, tau_omega)


def spectrum_peak_frequency(phi: ARCoefficients) -> float | None:
    """Interior maximizer of the AR(2) spectral density, if it exists.

    omega* = arccos(-phi1 (1 - phi2) / (4 phi2)) in (0, pi), defined when
    the arccos argument lies strictly inside (-1, 1). Returns None when the
    spectrum peaks at an endpoint instead.
    """
    if phi.phi2 == 0.0:
        raise ArgumentError("spectrum_peak_frequency requires phi2 != 0")
    arg = -phi.phi1 * (1.0 - phi.phi2) / (4.0 * phi.phi2)
    if abs(arg) >= 1.0:
        return None
    return math.acos(arg)


def irf_weights(loc: Localization, n: int, horizon: int) -> list[float]:
    """Impulse-response weights w_0..w_horizon of the long-cycle AR(2).

    w_j = r^j sin(theta (j+1)) / sin(theta) with r = exp(c/n), theta = d/n,
    which is the moving-average representation of the complex-root AR(2);
    w_0 = 1 always. Callers scale by an innovation standard deviation.
    """
    loc.validate()
    _check_n(n)
    if horizon < 1:
        raise ArgumentError(f"horizon must be >= 1, got {horizon}")
    r = math.exp(loc.c / n)
    theta = loc.d / n
    s = math.sin(theta)
    if abs(s) > 1e-14:
        return [(r**j) * math.sin(theta * (j + 1)) / s for j in range(horizon + 1)]
    # theta an exact multiple of pi cannot happen for d > 0, n >= 3 with
    # d/n < pi in practice, but fall back to the AR(2) recursion anyway.
    phi = phi_from_cd(loc, n)
    w = [1.0, phi.phi1]
    for _ in range(2, horizon + 1):
        w.append(phi.phi1 * w[-1] + phi.phi2 * w[-2])
    return w[: horizon + 1]
