# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulation kernel: forward Euler for the (J, K) diffusion system.

The numpy fallback in _numpy_kernel.py implements the identical recursion
with the identical per-element operation order.
"""

import numpy as np


NAME = "cython"


def em_paths(double c, double d, dW, double dt):
    """Forward Euler over paths; dW is (R, N), returns (J, K, G) of (R, N+1)."""
    cdef double[:, ::1] w = np.ascontiguousarray(dW, dtype=np.float64)
    cdef Py_ssize_t R = w.shape[0]
    cdef Py_ssize_t N = w.shape[1]
    J_arr = np.empty((R, N + 1), dtype=np.float64)
    K_arr = np.empty((R, N + 1), dtype=np.float64)
    G_arr = np.empty((R, N + 1), dtype=np.float64)
    cdef double[:, ::1] J = J_arr
    cdef double[:, ::1] K = K_arr
    cdef double[:, ::1] G = G_arr
    cdef double inv_d = 1.0 / d
    cdef double j, k, g, jn, kn
    cdef Py_ssize_t r, i
    with nogil:
        for r in range(R):
            j = 0.0
            k = 0.0
            for i in range(N):
                J[r, i] = j
                K[r, i] = k
                g = c * j + d * k
                G[r, i] = g
                jn = j + g * dt
                kn = k + (c * k - d * j) * dt + inv_d * w[r, i]
                j = jn
                k = kn
            J[r, N] = j
            K[r, N] = k
            G[r, N] = c * j + d * k
    return J_arr, K_arr, G_arr
