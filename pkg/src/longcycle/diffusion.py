"""The limiting diffusions and draws from the limiting Wald law.

The scaled long-cycle process converges weakly to sigma * J_{c,d}, where

    J_{c,d}(r) = (1/d) integral_0^r exp(c (r-s)) sin(d (r-s)) dW(s),

K_{c,d} is the matching damped-cosine integral and
G_{c,d} = c J_{c,d} + d K_{c,d}. The pair (J, K) solves

    dJ(r) = G(r) dr
    dK(r) = c K(r) dr - d J(r) dr + (1/d) dW(r),   J(0) = K(0) = 0,

which is simulated by forward Euler on the uniform grid r_i = i dt,
i = 0..N, N = floor(1/dt).

Discretization conventions used consistently everywhere below:

* time integrals are left rectangle sums over i < N;
* Ito integrals are left-endpoint sums  sum_i X_i dW_i, i < N;
* continuous-time projections (demeaning, deterministic cycles, linear
  trend) are computed as exact least-squares fits on the left grid, so
  projecting twice changes nothing.

The limiting Wald law for a localization (c, d) and a deterministic kind is

    W(c,d) = integral_0^1 { Jt(r) B - Gt(r) A }^2 dr
             -----------------------------------------
             int Jt^2 int Gt^2 - (int Jt Gt)^2

with A = int Jt dW, B = int Gt dW, and Jt, Gt the projected (tilde)
processes. Draws are computed on rescaled paths (J and G divided by their
root-mean-square on the grid), which leaves W unchanged but keeps the
Gram determinant in floating-point range even for very explosive (c, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import backend
from ._rng import BLOCK, RESAMPLE_OFFSET, block_normals, substream
from .core_model import Localization
from .errors import ArgumentError, NumericalError

_MAX_RESAMPLE_ATTEMPTS = 16
_DEGENERATE_TOL = 1e-14


@dataclass
class PathBundle:
    """One discretized path of (dW, J, K, G) on r_i = i dt, i = 0..N."""

    loc: Localization
    dt: float
    dW: np.ndarray  # (N,) Brownian increments, Normal(0, dt)
    J: np.ndarray  # (N+1,)
    K: np.ndarray  # (N+1,)
    G: np.ndarray  # (N+1,)
    det_kind: str = "none"

    @property
    def n_steps(self) -> int:
        return int(self.dW.shape[0])

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.J.shape[0]) * self.dt


@dataclass(frozen=True)
class Functionals:
    """Integral functionals of one path over [0, 1]."""

    int_J2: float
    int_G2: float
    int_JG: float
    int_JdW: float
    int_GdW: float
    J1: float
    G1: float


def n_steps(dt: float) -> int:
    """Number of Euler steps for a step size dt."""
    inv = 1.0 / dt
    n = int(math.floor(inv + 1e-9))
    return n


def _check_dt(dt: float) -> float:
    if not (0.0 < dt <= 0.05):
        raise ArgumentError(f"dt must be in (0, 0.05], got {dt}")
    return dt


def simulate_path(loc: Localization, dt: float, seed: int) -> PathBundle:
    """Simulate one (J, K, G) path by forward Euler.

    Rejects d < 0.1: the (1/d) noise loading makes the system useless
    numerically near d = 0, and no supported grid requests it.
    """
    loc.validate()
    _check_dt(dt)
    if loc.d < 0.1:
        raise ArgumentError(f"simulate_path requires d >= 0.1, got d={loc.d}")
    N = n_steps(dt)
    dW = math.sqrt(dt) * substream(seed).standard_normal(N)
    J, K, G = backend.em_paths(loc.c, loc.d, dW[None, :], dt)
    return PathBundle(loc=loc, dt=dt, dW=dW, J=J[0], K=K[0], G=G[0])


# ---------------------------------------------------------------------------
# Residual (tilde) projections


def _parse_kind(det_kind: str) -> tuple[str, tuple[int, ...]]:
    """Normalize a deterministic-kind token for projection purposes.

    Seasonal dummies lead to the same limit experiment as a constant mean,
    so 'seasonal:P' projects like 'constant'.
    """
    if det_kind in ("none", "constant", "trend"):
        return det_kind, ()
    if det_kind.startswith("seasonal"):
        return "constant", ()
    if det_kind == "cycles":
        return "cycles", (1,)
    if det_kind.startswith("cycles:"):
        ks = tuple(sorted(int(k) for k in det_kind.split(":", 1)[1].split(",") if k))
        if not ks or any(k < 1 for k in ks):
            raise ArgumentError(f"bad cycles token {det_kind!r}")
        return "cycles", ks
    raise ArgumentError(f"unknown deterministic kind {det_kind!r}")


@lru_cache(maxsize=64)
def _projector(kind_token: str, N: int, dt: float):
    """(design_full, solve) for the continuous-time regression.

    design_full has N+1 rows (full grid); coefficients are least squares on
    the left grid rows 0..N-1, computed through a pseudoinverse so the
    projection is idempotent to rounding.
    """
    kind, ks = _parse_kind(kind_token)
    if kind == "none":
        return None
    r_full = np.arange(N + 1) * dt
    cols = [np.ones(N + 1)]
    if kind == "cycles":
        for k in ks:
            cols.append(np.cos(2.0 * np.pi * k * r_full))
            cols.append(np.sin(2.0 * np.pi * k * r_full))
    elif kind == "trend":
        cols.append(r_full)
    design_full = np.column_stack(cols)
    pinv_left = np.linalg.pinv(design_full[:N])
    return design_full, pinv_left


def _project_block(X: np.ndarray, projector) -> np.ndarray:
    # X is (R, N+1); fit on left grid, subtract fit on the full grid.
    if projector is None:
        return X
    design_full, pinv_left = projector
    N = design_full.shape[0] - 1
    coef = X[:, :N] @ pinv_left.T
    return X - coef @ design_full.T


def project_path(path: PathBundle, det_kind: str) -> PathBundle:
    """Replace J and G by their continuous-time regression residuals.

    K has no tilde variant in any limit law and is carried unchanged.
    """
    proj = _projector(det_kind, path.n_steps, path.dt)
    Jt = _project_block(path.J[None, :], proj)[0]
    Gt = _project_block(path.G[None, :], proj)[0]
    return replace(path, J=Jt, G=Gt, det_kind=det_kind)


# ---------------------------------------------------------------------------
# Functionals and Wald draws


def functionals(path: PathBundle) -> Functionals:
    """Left-rectangle time integrals and left-point Ito sums."""
    N = path.n_steps
    J, G, dW, dt = path.J[:N], path.G[:N], path.dW, path.dt
    return Functionals(
        int_J2=float(np.dot(J, J) * dt),
        int_G2=float(np.dot(G, G) * dt),
        int_JG=float(np.dot(J, G) * dt),
        int_JdW=float(np.dot(J, dW)),
        int_GdW=float(np.dot(G, dW)),
        J1=float(path.J[N]),
        G1=float(path.G[N]),
    )


def _wald_from_projected(Jt: np.ndarray, Gt: np.ndarray, dW: np.ndarray, dt: float):
    """Vector of W draws from projected (R, N+1) paths, plus degeneracy mask.

    Paths are rescaled by their grid RMS first (W is invariant); the
    numerator is expanded as B^2 int J^2 + A^2 int G^2 - 2 A B int JG,
    which is the same left-rectangle sum as integrating
    { Jt B - Gt A }^2 term by term.
    """
    N = dW.shape[1]
    Jl, Gl = Jt[:, :N], Gt[:, :N]
    sJ = np.sqrt(np.mean(Jl * Jl, axis=1))
    sG = np.sqrt(np.mean(Gl * Gl, axis=1))
    bad_scale = ~(np.isfinite(sJ) & np.isfinite(sG) & (sJ > 0.0) & (sG > 0.0))
    sJ = np.where(bad_scale, 1.0, sJ)
    sG = np.where(bad_scale, 1.0, sG)
    uJ = Jl / sJ[:, None]
    uG = Gl / sG[:, None]
    a = np.sum(uJ * uJ, axis=1) * dt
    b = np.sum(uG * uG, axis=1) * dt
    x = np.sum(uJ * uG, axis=1) * dt
    A = np.sum(uJ * dW, axis=1)
    B = np.sum(uG * dW, axis=1)
    den = a * b - x * x
    num = B * B * a + A * A * b - 2.0 * A * B * x
    degenerate = bad_scale | ~np.isfinite(den) | ~np.isfinite(num) | (den < _DEGENERATE_TOL * a * b)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = num / den
    return w, degenerate


def wald_limit_draw(loc: Localization, det_kind: str, dt: float, seed: int) -> float:
    """One draw of the limiting Wald law W(c,d) for a deterministic kind.

    Computes the numerator literally as sum_i { Jt_i B - Gt_i A }^2 dt on
    the rescaled path. A degenerate Gram determinant (below 1e-14 on the
    unit-RMS scale) triggers a resample from a reserved substream.
    """
    loc.validate()
    _check_dt(dt)
    N = n_steps(dt)
    proj = _projector(det_kind, N, dt)
    sqdt = math.sqrt(dt)
    for attempt in range(_MAX_RESAMPLE_ATTEMPTS):
        if attempt == 0:
            rng = substream(seed)
        else:
            rng = substream(seed, RESAMPLE_OFFSET, attempt)
        dW = sqdt * rng.standard_normal(N)
        J, K, G = backend.em_paths(loc.c, loc.d, dW[None, :], dt)
        Jt = _project_block(J, proj)[0]
        Gt = _project_block(G, proj)[0]
        Jl, Gl = Jt[:N], Gt[:N]
        sJ = float(np.sqrt(np.mean(Jl * Jl)))
        sG = float(np.sqrt(np.mean(Gl * Gl)))
        if not (np.isfinite(sJ) and np.isfinite(sG) and sJ > 0.0 and sG > 0.0):
            continue
        uJ, uG = Jl / sJ, Gl / sG
        a = float(np.dot(uJ, uJ) * dt)
        b = float(np.dot(uG, uG) * dt)
        x = float(np.dot(uJ, uG) * dt)
        A = float(np.dot(uJ, dW))
        B = float(np.dot(uG, dW))
        den = a * b - x * x
        if not np.isfinite(den) or den < _DEGENERATE_TOL * a * b:
            continue
        num = float(np.sum((uJ * B - uG * A) ** 2) * dt)
        return num / den
    raise NumericalError(
        f"wald_limit_draw at (c={loc.c}, d={loc.d}): Gram determinant degenerate after "
        f"{_MAX_RESAMPLE_ATTEMPTS} resampling attempts; try a smaller dt"
    )


def wald_draw_batch(
    loc: Localization,
    det_kinds: tuple[str, ...],
    R: int,
    dt: float,
    seed: int,
    cell_key: tuple[int, int] = (0, 0),
) -> tuple[dict[str, np.ndarray], int]:
    """R draws of W(c,d) for each deterministic kind, sharing paths.

    Replication r lives in block r // BLOCK, row r % BLOCK, keyed by
    (seed, *cell_key, block): the draws are independent of chunking,
    thread count, and of the total R requested. Returns the draws per kind
    and the number of degenerate-path resampling events (expected 0 at the
    default dt).
    """
    loc.validate()
    _check_dt(dt)
    if R < 1:
        raise ArgumentError(f"R must be >= 1, got {R}")
    N = n_steps(dt)
    sqdt = math.sqrt(dt)
    projs = {kind: _projector(kind, N, dt) for kind in det_kinds}
    out = {kind: np.empty(R) for kind in det_kinds}
    resample_events = 0
    n_blocks = (R + BLOCK - 1) // BLOCK
    for blk in range(n_blocks):
        lo = blk * BLOCK
        hi = min(lo + BLOCK, R)
        dW = sqdt * block_normals(seed, cell_key, blk, (BLOCK, N))
        J, _, G = backend.em_paths(loc.c, loc.d, dW, dt)
        if not np.isfinite(J[: hi - lo, N]).all():
            raise NumericalError(
                f"Euler paths overflowed at (c={loc.c}, d={loc.d}) with dt={dt}; "
                "reduce dt for localizations this explosive"
            )
        for kind in det_kinds:
            Jt = _project_block(J, projs[kind])
            Gt = _project_block(G, projs[kind])
            w, degenerate = _wald_from_projected(Jt, Gt, dW, dt)
            for row in np.flatnonzero(degenerate[: hi - lo]):
                w[row] = _resample_row(loc, kind, projs[kind], N, dt, seed, cell_key, lo + int(row))
                resample_events += 1
            out[kind][lo:hi] = w[: hi - lo]
    return out, resample_events


def _resample_row(loc, kind, proj, N, dt, seed, cell_key, row_index) -> float:
    sqdt = math.sqrt(dt)
    for attempt in range(1, _MAX_RESAMPLE_ATTEMPTS + 1):
        rng = substream(seed, *cell_key, RESAMPLE_OFFSET + row_index, attempt)
        dW = sqdt * rng.standard_normal((1, N))
        J, _, G = backend.em_paths(loc.c, loc.d, dW, dt)
        Jt = _project_block(J, proj)
        Gt = _project_block(G, proj)
        w, degenerate = _wald_from_projected(Jt, Gt, dW, dt)
        if not degenerate[0]:
            return float(w[0])
    raise NumericalError(
        f"degenerate Wald draw persisted through {_MAX_RESAMPLE_ATTEMPTS} resamples "
        f"at (c={loc.c}, d={loc.d}), replication {row_index}"
    )


# ---------------------------------------------------------------------------
# Pathwise identity diagnostics


def identity_residuals(path: PathBundle) -> dict[str, tuple[float, float]]:
    """(lhs, rhs) pairs of three pathwise stochastic-calculus identities.

    On an unprojected path, with all integrals in the conventions above:

      'f':  J(1)^2                 =  2 int J G
      'e':  int G^2                =  (c^2+d^2) int J^2 + J(1) G(1)
                                        - int J dW - c J(1)^2
      'g':  (G(1)^2 - 1) / 2       =  c int G^2 + c d int K G
                                        - d^2 int J G + int G dW

    Each holds exactly in continuous time and up to an O(dt) discrepancy
    under the Euler scheme; the exact discrete form of the discrepancy is
    asserted in the test suite.
    """
    c, d = path.loc.c, path.loc.d
    f = functionals(path)
    N = path.n_steps
    int_KG = float(np.dot(path.K[:N], path.G[:N]) * path.dt)
    lhs_f = f.J1**2
    rhs_f = 2.0 * f.int_JG
    lhs_e = f.int_G2
    rhs_e = (c * c + d * d) * f.int_J2 + f.J1 * f.G1 - f.int_JdW - c * f.J1**2
    lhs_g = 0.5 * (f.G1**2 - 1.0)
    rhs_g = c * f.int_G2 + c * d * int_KG - d * d * f.int_JG + f.int_GdW
    return {"f": (lhs_f, rhs_f), "e": (lhs_e, rhs_e), "g": (lhs_g, rhs_g)}
