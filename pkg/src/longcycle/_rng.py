"""Keyed random-number streams.

All Monte Carlo draws are keyed by (seed, *integers) through Philox, a
counter-based bit generator. A draw therefore depends only on its key,
never on scheduling, chunking, or how many other draws were requested.
"""

from __future__ import annotations

import numpy as np

# Replications are grouped in fixed-size blocks; block b of a stream uses
# key (*key, b). Partial blocks still generate the full block and slice,
# so results do not depend on the total replication count.
BLOCK = 1024

# Key-space offset reserved for degenerate-draw resampling (see diffusion).
RESAMPLE_OFFSET = 1 << 20


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return a Generator for the given integer key tuple."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def block_normals(seed: int, key: tuple[int, ...], block: int, shape: tuple[int, ...]) -> np.ndarray:
    """Standard normals for one block of a keyed stream."""
    return substream(seed, *key, block).standard_normal(shape)
