"""Deterministic random-number generation.

All samplers in this package take an explicit ``numpy.random.Generator``.
Streams are produced by the PCG64 bit generator seeded through
``numpy.random.SeedSequence``, so runs are reproducible bit-for-bit for a
fixed numpy version. Child generators are derived from (master_seed, *keys)
tuples rather than by sharing state, which makes trial execution
order-independent.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["make_rng", "child_rng", "stable_key"]


def make_rng(seed: int) -> np.random.Generator:
    """Create a fresh PCG64 generator from an integer seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def child_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Derive an independent generator from a master seed and integer keys.

    The derivation is a pure function of its arguments (SeedSequence entropy
    pooling), so any unit of work keyed by e.g. (trial index, algorithm) can
    be executed in any order, or in parallel, without changing its stream.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((master_seed, *keys))))


def stable_key(name: str) -> int:
    """Map a string to a stable 63-bit integer key (process-independent)."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1
