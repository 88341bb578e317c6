"""Pure-numpy twin of the compiled simulation kernel.

Keeps the exact same per-element operation order as _kernel.pyx so the two
backends agree to floating-point reproducibility (no FMA contraction on
either side).
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def em_paths(c: float, d: float, dW: np.ndarray, dt: float):
    """Forward Euler for the (J, K) system, vectorized over paths.

    dW has shape (R, N) and holds Brownian increments (sd sqrt(dt)).
    Returns (J, K, G), each (R, N+1), with
        J_{i+1} = J_i + G_i dt
        K_{i+1} = K_i + (c K_i - d J_i) dt + (1/d) dW_i
        G_i     = c J_i + d K_i
    """
    dW = np.ascontiguousarray(dW, dtype=np.float64)
    R, N = dW.shape
    J = np.empty((R, N + 1))
    K = np.empty((R, N + 1))
    G = np.empty((R, N + 1))
    inv_d = 1.0 / d
    j = np.zeros(R)
    k = np.zeros(R)
    for i in range(N):
        J[:, i] = j
        K[:, i] = k
        g = c * j + d * k
        G[:, i] = g
        jn = j + g * dt
        kn = k + (c * k - d * j) * dt + inv_d * dW[:, i]
        j, k = jn, kn
    J[:, N] = j
    K[:, N] = k
    G[:, N] = c * j + d * k
    return J, K, G
