"""
Seeded random streams for deterministic replay.

Every replication owns one ``numpy.random.Generator`` (PCG64). Streams are
never shared between replications. The split rule derives a per-replication
stream from the experiment's base seed and the (agent, instance, run)
indices through ``numpy.random.SeedSequence``, whose entropy pool hashes the
spawn key with an avalanche mix. Identical inputs give identical draws on the
same numpy build.
"""

from __future__ import annotations

import numpy as np

SEED_MAX = 2**64 - 1


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed > SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(base_seed: int, *key: int) -> int:
    """Mix ``base_seed`` with integer indices into a new 64-bit seed."""
    ss = np.random.SeedSequence(entropy=_check_seed(base_seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Return a PCG64 generator for ``seed`` (optionally split by ``key``)."""
    ss = np.random.SeedSequence(entropy=_check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def replication_rng(base_seed: int, agent: int, instance: int, run: int) -> np.random.Generator:
    """The stream owned by replication ``run`` of ``agent`` on ``instance``."""
    return make_rng(derive_seed(base_seed, agent, instance, run))
