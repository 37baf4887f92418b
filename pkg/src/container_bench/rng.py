"""Seedable randomness with a documented substream contract.

Generator: PCG64 (numpy), named in every report as "pcg64".

Substreams: trial i of a run with master seed m uses the 64-bit seed
splitmix64_at(m, i), the i-th output of the splitmix64 sequence seeded at m.
Parallel and serial executions of the same trial grid therefore produce
identical statistics.

Sampling without replacement is a partial Fisher-Yates shuffle driven by
Generator.integers, so a sample is a pure function of (n, size, seed).
"""

from __future__ import annotations

import numpy as np

GENERATOR_NAME = "pcg64"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64_at(seed: int, index: int) -> int:
    """The index-th output of the splitmix64 stream seeded at `seed`."""
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def substream_seed(master_seed: int, trial_index: int) -> int:
    return splitmix64_at(master_seed & _MASK64, trial_index)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_without_replacement(rng: np.random.Generator, n: int, size: int) -> tuple[int, ...]:
    """Draw `size` distinct elements of range(n), in draw order."""
    if not 0 <= size <= n:
        raise ValueError(f"cannot draw {size} distinct elements from range({n})")
    pool = list(range(n))
    for i in range(size):
        j = i + int(rng.integers(0, n - i))
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(pool[:size])
