"""Deterministic substream derivation.

Every stochastic step in the package (sampling, bootstrap, simulation
sweeps) draws from a PCG64 generator seeded through here, so whole
pipelines are reproducible from one master seed and results do not depend
on evaluation order.  String keys (dataset ids) are folded in through
SHA-256 because Python's ``hash`` is salted per process.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream(master_seed: int, *keys) -> np.random.SeedSequence:
    """SeedSequence for (master_seed, *keys); keys are ints or strings."""
    entropy = [int(master_seed)]
    for key in keys:
        if isinstance(key, str):
            digest = hashlib.sha256(key.encode("utf-8")).digest()
            entropy.extend(
                int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)
            )
        else:
            entropy.append(int(key))
    if any(e < 0 for e in entropy):
        raise ValueError("seeds and integer keys must be non-negative")
    return np.random.SeedSequence(entropy)


def rng_for(master_seed: int, *keys) -> np.random.Generator:
    return np.random.default_rng(substream(master_seed, *keys))
