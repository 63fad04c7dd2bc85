"""Counter-based uniform streams keyed by (seed, path, asset).

Draws come from Philox4x64-10 (numpy's ``Philox`` bit generator) with key
``(seed, 0)``. Each path owns ``ceil(n_assets / 4)`` consecutive counter
blocks; path ``p`` starts at block ``p * ceil(n_assets / 4)`` and asset ``j``
reads 64-bit word ``j`` of that run. The word becomes a double in [0, 1)
from its top 53 bits. Any contiguous slice of paths can therefore be
generated independently and reproduces the same numbers as a single pass.
"""

from __future__ import annotations

import math

import numpy as np

_U53 = 2.0**-53
MAX_SEED = 2**64 - 1


def blocks_per_path(n_assets: int) -> int:
    return max(1, -(-n_assets // 4))


def words53(seed: int, first_path: int, n_paths: int, n_assets: int) -> np.ndarray:
    """Top 53 bits of each draw for paths ``[first_path, first_path + n_paths)``.

    Shape (n_paths, n_assets), dtype uint64. The uniform is ``word * 2**-53``.
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    m = blocks_per_path(n_assets)
    gen = np.random.Philox(key=seed, counter=first_path * m)
    raw = gen.random_raw(n_paths * 4 * m).reshape(n_paths, 4 * m)[:, :n_assets]
    return raw >> np.uint64(11)


def uniforms(seed: int, first_path: int, n_paths: int, n_assets: int) -> np.ndarray:
    return words53(seed, first_path, n_paths, n_assets).astype(np.float64) * _U53


def threshold53(p: float) -> int:
    """Integer cut-off with ``word < threshold53(p)`` exactly when ``word * 2**-53 < p``."""
    return math.ceil(p * 2.0**53)
